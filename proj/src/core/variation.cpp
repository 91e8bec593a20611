#include "variation.hpp"

namespace fel {

VariationFlux variation_flux(const GeometryCache& cache, const Frame& frame, double conformality_cap) {
  require(cache.dim == 3, ErrorCode::invalid_argument, "variation_flux: derived for m = 3");
  require(cache.conformality_residual <= conformality_cap, ErrorCode::gauge_failure,
          "variation_flux: non-conformal input, residual " + std::to_string(cache.conformality_residual));

  Spectral sp(cache.grid);
  const int n = cache.grid->size();

  // b_i = e2 . d_i e1 (connection with the opposite sign of connection_form)
  ScalarField ax, ay;
  connection_form(cache, frame, ax, ay);

  // scalar mean curvature and its vector field
  ScalarField Hs(cache.grid);
  for (int p = 0; p < n; ++p) Hs.data[p] = dot(cache.H.vec_at(p), cache.normal.vec_at(p));
  ScalarField Hx, Hy;
  sp.grad(Hs, Hx, Hy);
  VectorField Hvx = sp.deriv_x(cache.H), Hvy = sp.deriv_y(cache.H);
  VectorField nx = sp.deriv_x(cache.normal), ny = sp.deriv_y(cache.normal);

  VariationFlux fl;
  fl.VX = VectorField(cache.grid, 3);
  fl.VY = VectorField(cache.grid, 3);
  fl.VX_T = VectorField(cache.grid, 3);
  fl.VY_T = VectorField(cache.grid, 3);
  fl.VX_W = VectorField(cache.grid, 3);
  fl.VY_W = VectorField(cache.grid, 3);

  for (int p = 0; p < n; ++p) {
    const double b1 = -ax.data[p], b2 = -ay.data[p];
    const double e2l = std::exp(-2.0 * cache.lam.data[p]);
    const Vec phx = cache.phi_x.vec_at(p), phy = cache.phi_y.vec_at(p);
    const Vec nv = cache.normal.vec_at(p);
    const double s11 = dot(cache.II11.vec_at(p), nv);
    const double s12 = dot(cache.II12.vec_at(p), nv);
    const double s22 = dot(cache.II22.vec_at(p), nv);

    // tangential part: derived directly from the frame family
    //   delta e1 = e^{-lam} (d_X w . n) n, delta e2 = e^{-lam} (d_Y w . n) n
    // together with the metric variation of |e2.de1|^2_g dvol_g; validated
    // against centered finite differences of F_T with Coulomb re-projection.
    const Vec bphi = b1 * phx + b2 * phy;  // (e2 . grad e1, grad Phi) contraction
    const double bb = b1 * b1 + b2 * b2;
    Vec vt1 = (b1 * s12 + b2 * s22) * nv + b1 * bphi - (0.5 * bb) * phx;
    Vec vt2 = (-(b1 * s11 + b2 * s12)) * nv + b2 * bphi - (0.5 * bb) * phy;
    vt1 *= e2l;
    vt2 *= e2l;
    fl.VX_T.set_vec(p, vt1);
    fl.VY_T.set_vec(p, vt2);

    // Willmore part
    Vec vw1 = Hvx.vec_at(p) - (3.0 * Hx.data[p]) * nv + cross((-1.0) * ny.vec_at(p), cache.H.vec_at(p));
    Vec vw2 = Hvy.vec_at(p) - (3.0 * Hy.data[p]) * nv + cross(nx.vec_at(p), cache.H.vec_at(p));
    vw1 *= 0.5;
    vw2 *= 0.5;
    fl.VX_W.set_vec(p, vw1);
    fl.VY_W.set_vec(p, vw2);

    fl.VX.set_vec(p, vt1 + vw1);
    fl.VY.set_vec(p, vt2 + vw2);
  }
  return fl;
}

namespace {

VectorField flux_divergence(const GridPtr& grid, const VectorField& VX, const VectorField& VY) {
  Spectral sp(grid);
  VectorField dx = sp.deriv_x(VX), dy = sp.deriv_y(VY);
  VectorField out(grid, VX.dim);
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] = dx.data[k] + dy.data[k];
  return out;
}

double pair_flat(const VectorField& a, const VectorField& b) {
  double s = 0;
  for (size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
  return s * a.grid->jacobian();
}

}  // namespace

double first_variation_FT(const GeometryCache& cache, const Frame& frame, const VectorField& w) {
  auto fl = variation_flux(cache, frame);
  return pair_flat(w, flux_divergence(cache.grid, fl.VX_T, fl.VY_T));
}

double first_variation_W(const GeometryCache& cache, const VectorField& w) {
  auto fl = variation_flux(cache, coordinate_frame(cache));
  return pair_flat(w, flux_divergence(cache.grid, fl.VX_W, fl.VY_W));
}

double first_variation_F(const GeometryCache& cache, const Frame& frame, const VectorField& w) {
  auto fl = variation_flux(cache, frame);
  return pair_flat(w, flux_divergence(cache.grid, fl.VX, fl.VY));
}

VectorField el_density(const GeometryCache& cache, const Frame& frame, double conformality_cap) {
  auto fl = variation_flux(cache, frame, conformality_cap);
  return flux_divergence(cache.grid, fl.VX, fl.VY);
}

double el_residual_norm(const GeometryCache& cache, const Frame& frame, double conformality_cap) {
  return l2_norm(el_density(cache, frame, conformality_cap));
}

// ---------------------------------------------------------------------------
// Discrete energy with exact gradient via reverse accumulation.

DiscreteEnergy discrete_energy(const Immersion& imm, bool with_gradient) {
  require(imm.dim() == 3, ErrorCode::invalid_argument, "discrete_energy: descent pipeline is m = 3");
  const GridPtr grid = imm.grid();
  Spectral sp(grid);
  const int n = grid->size();
  const double jac = grid->jacobian();

  // ---- forward pass, keeping every intermediate ----
  VectorField P = sp.deriv_x(imm.phi);
  VectorField Q = sp.deriv_y(imm.phi);
  VectorField Pxx, Pxy, Pyy;
  sp.second_derivs(imm.phi, Pxx, Pxy, Pyy);

  std::vector<double> g11(n), g12(n), g22(n), det(n), sg(n), r(n), cdot(n), q(n);
  std::vector<double> sh(n), wc(n);
  VectorField e1(grid, 3), f2(grid, 3), e2(grid, 3), nrm(grid, 3);
  std::vector<double> s11(n), s12(n), s22(n), S11(n), S12(n), S22(n), ii2(n);

  for (int p = 0; p < n; ++p) {
    const Vec Pp = P.vec_at(p), Qp = Q.vec_at(p);
    g11[p] = dot(Pp, Pp);
    g12[p] = dot(Pp, Qp);
    g22[p] = dot(Qp, Qp);
    det[p] = g11[p] * g22[p] - g12[p] * g12[p];
    require(det[p] > 0 && g11[p] > 0, ErrorCode::degenerate_input, "discrete_energy: metric degeneracy");
    sg[p] = std::sqrt(det[p]);
    r[p] = 1.0 / std::sqrt(g11[p]);
    const Vec e1p = r[p] * Pp;
    e1.set_vec(p, e1p);
    cdot[p] = dot(Qp, e1p);
    const Vec f2p = Qp - cdot[p] * e1p;
    f2.set_vec(p, f2p);
    q[p] = norm(f2p);
    require(q[p] > 0, ErrorCode::degenerate_input, "discrete_energy: metric degeneracy");
    const Vec e2p = (1.0 / q[p]) * f2p;
    e2.set_vec(p, e2p);
    nrm.set_vec(p, cross(e1p, e2p));

    s11[p] = dot(Pxx.vec_at(p), nrm.vec_at(p));
    s12[p] = dot(Pxy.vec_at(p), nrm.vec_at(p));
    s22[p] = dot(Pyy.vec_at(p), nrm.vec_at(p));

    sh[p] = g12[p] / g11[p];
    wc[p] = std::sqrt(g11[p]) / sg[p];
    S11[p] = r[p] * r[p] * s11[p];
    S12[p] = r[p] * wc[p] * (s12[p] - sh[p] * s11[p]);
    S22[p] = wc[p] * wc[p] * (s22[p] - 2.0 * sh[p] * s12[p] + sh[p] * sh[p] * s11[p]);
    ii2[p] = S11[p] * S11[p] + 2.0 * S12[p] * S12[p] + S22[p] * S22[p];
  }

  VectorField e2x = sp.deriv_x(e2), e2y = sp.deriv_y(e2);
  ScalarField a1(grid), a2(grid);
  for (int p = 0; p < n; ++p) {
    a1.data[p] = dot(e1.vec_at(p), e2x.vec_at(p));
    a2.data[p] = dot(e1.vec_at(p), e2y.vec_at(p));
  }
  ScalarField rhs = sp.divergence(a1, a2);
  for (auto& v : rhs.data) v = -v;
  ScalarField theta = sp.poisson(rhs).phi;
  ScalarField tx, ty;
  sp.grad(theta, tx, ty);
  std::vector<double> b1(n), b2(n), u1(n), u2(n);
  double E_T = 0, E_W = 0;
  for (int p = 0; p < n; ++p) {
    b1[p] = a1.data[p] + tx.data[p];
    b2[p] = a2.data[p] + ty.data[p];
    u1[p] = b1[p] * r[p];
    u2[p] = (b2[p] - sh[p] * b1[p]) * wc[p];
    E_T += 0.5 * (u1[p] * u1[p] + u2[p] * u2[p]) * sg[p];
    E_W += 0.25 * ii2[p] * sg[p];
  }
  E_T *= jac;
  E_W *= jac;

  DiscreteEnergy out;
  out.F_T = E_T;
  out.quarter_II2 = E_W;
  out.value = E_T + E_W;
  {
    double gmax = 0, d_diag = 0, d_off = 0;
    for (int p = 0; p < n; ++p) {
      gmax = std::max(gmax, std::abs(g11[p]));
      d_diag = std::max(d_diag, std::abs(g11[p] - g22[p]));
      d_off = std::max(d_off, std::abs(g12[p]));
    }
    out.conformality_residual = d_diag / gmax + d_off / gmax;
  }
  if (!with_gradient) return out;

  // ---- reverse pass ----
  std::vector<double> g11b(n, 0), g12b(n, 0), g22b(n, 0), detb(n, 0), sgb(n, 0), rb(n, 0), cb(n, 0), qb(n, 0);
  std::vector<double> shb(n, 0), wcb(n, 0), s11b(n, 0), s12b(n, 0), s22b(n, 0);
  ScalarField a1b(grid), a2b(grid), b1b(grid), b2b(grid);
  VectorField Pb(grid, 3), Qb(grid, 3), Pxxb(grid, 3), Pxyb(grid, 3), Pyyb(grid, 3);
  VectorField e1b(grid, 3), e2b(grid, 3), f2b(grid, 3), nrmb(grid, 3), e2xb(grid, 3), e2yb(grid, 3);

  // energy sums
  for (int p = 0; p < n; ++p) {
    const double w_et = jac;  // dE/dE_T-term weight
    // E_T term: 0.5 (u1^2 + u2^2) sg
    const double u1b = w_et * u1[p] * sg[p];
    const double u2b = w_et * u2[p] * sg[p];
    sgb[p] += w_et * 0.5 * (u1[p] * u1[p] + u2[p] * u2[p]);
    // u1 = b1 r; u2 = (b2 - sh b1) wc
    b1b.data[p] += u1b * r[p] - u2b * wc[p] * sh[p];
    rb[p] += u1b * b1[p];
    b2b.data[p] += u2b * wc[p];
    shb[p] += -u2b * wc[p] * b1[p];
    wcb[p] += u2b * (b2[p] - sh[p] * b1[p]);
    // E_W term: 0.25 ii2 sg
    const double ii2b = jac * 0.25 * sg[p];
    sgb[p] += jac * 0.25 * ii2[p];
    const double S11b = ii2b * 2.0 * S11[p];
    const double S12b = ii2b * 4.0 * S12[p];
    const double S22b = ii2b * 2.0 * S22[p];
    // S11 = r^2 s11
    rb[p] += S11b * 2.0 * r[p] * s11[p];
    s11b[p] += S11b * r[p] * r[p];
    // S12 = r wc (s12 - sh s11)
    rb[p] += S12b * wc[p] * (s12[p] - sh[p] * s11[p]);
    wcb[p] += S12b * r[p] * (s12[p] - sh[p] * s11[p]);
    s12b[p] += S12b * r[p] * wc[p];
    shb[p] += -S12b * r[p] * wc[p] * s11[p];
    s11b[p] += -S12b * r[p] * wc[p] * sh[p];
    // S22 = wc^2 (s22 - 2 sh s12 + sh^2 s11)
    const double inner = s22[p] - 2.0 * sh[p] * s12[p] + sh[p] * sh[p] * s11[p];
    wcb[p] += S22b * 2.0 * wc[p] * inner;
    s22b[p] += S22b * wc[p] * wc[p];
    shb[p] += S22b * wc[p] * wc[p] * (-2.0 * s12[p] + 2.0 * sh[p] * s11[p]);
    s12b[p] += S22b * wc[p] * wc[p] * (-2.0 * sh[p]);
    s11b[p] += S22b * wc[p] * wc[p] * sh[p] * sh[p];
  }

  // beta = alpha + grad theta; theta = Poisson(-div alpha)
  // theta_bar = Dx^T(tx_bar) + Dy^T(ty_bar) with tx_bar = b1b, ty_bar = b2b
  {
    for (int p = 0; p < n; ++p) {
      a1b.data[p] += b1b.data[p];
      a2b.data[p] += b2b.data[p];
    }
    ScalarField thetab = sp.deriv_x_adjoint(b1b);
    ScalarField tyb = sp.deriv_y_adjoint(b2b);
    for (int p = 0; p < n; ++p) thetab.data[p] += tyb.data[p];
    ScalarField rhsb = sp.poisson_adjoint(thetab);
    // rhs = -(Dx a1 + Dy a2)
    ScalarField da = sp.deriv_x(rhsb);  // Dx^T(-rhsb) = Dx(rhsb)
    ScalarField db = sp.deriv_y(rhsb);
    for (int p = 0; p < n; ++p) {
      a1b.data[p] += da.data[p];
      a2b.data[p] += db.data[p];
    }
  }

  // alpha_i = e1 . e2d_i
  for (int p = 0; p < n; ++p) {
    Vec e1acc = a1b.data[p] * e2x.vec_at(p) + a2b.data[p] * e2y.vec_at(p);
    e1b.set_vec(p, e1b.vec_at(p) + e1acc);
    e2xb.set_vec(p, a1b.data[p] * e1.vec_at(p));
    e2yb.set_vec(p, a2b.data[p] * e1.vec_at(p));
  }
  // e2 field bar from the spectral derivatives
  {
    VectorField t1f = sp.deriv_x(e2xb);
    VectorField t2f = sp.deriv_y(e2yb);
    for (size_t k = 0; k < e2b.data.size(); ++k) e2b.data[k] += -t1f.data[k] - t2f.data[k];
  }

  // pointwise geometry chain, reverse order
  for (int p = 0; p < n; ++p) {
    // s_ij = Pdd . n
    Pxxb.set_vec(p, s11b[p] * nrm.vec_at(p));
    Pxyb.set_vec(p, s12b[p] * nrm.vec_at(p));
    Pyyb.set_vec(p, s22b[p] * nrm.vec_at(p));
    Vec nb = nrmb.vec_at(p) + s11b[p] * Pxx.vec_at(p) + s12b[p] * Pxy.vec_at(p) + s22b[p] * Pyy.vec_at(p);
    // n = e1 x e2
    e1b.set_vec(p, e1b.vec_at(p) + cross(e2.vec_at(p), nb));
    e2b.set_vec(p, e2b.vec_at(p) + cross(nb, e1.vec_at(p)));
    // e2 = f2 / q
    const Vec e2bp = e2b.vec_at(p);
    const Vec f2p = f2.vec_at(p);
    Vec f2bp = (1.0 / q[p]) * e2bp - (dot(f2p, e2bp) / (q[p] * q[p] * q[p])) * f2p;
    f2b.set_vec(p, f2bp);
    // f2 = Q - c e1
    Qb.set_vec(p, Qb.vec_at(p) + f2bp);
    cb[p] += -dot(f2bp, e1.vec_at(p));
    Vec e1bp = e1b.vec_at(p) - cdot[p] * f2bp;
    // c = Q . e1
    Qb.set_vec(p, Qb.vec_at(p) + cb[p] * e1.vec_at(p));
    e1bp += cb[p] * Q.vec_at(p);
    // e1 = r P
    Pb.set_vec(p, Pb.vec_at(p) + r[p] * e1bp);
    rb[p] += dot(P.vec_at(p), e1bp);
    // wc = sqrt(g11)/sg ; sh = g12/g11 ; r = g11^{-1/2}
    g11b[p] += wcb[p] * 0.5 / (std::sqrt(g11[p]) * sg[p]);
    sgb[p] += -wcb[p] * std::sqrt(g11[p]) / (sg[p] * sg[p]);
    g12b[p] += shb[p] / g11[p];
    g11b[p] += -shb[p] * sh[p] / g11[p];
    g11b[p] += rb[p] * (-0.5) * r[p] / g11[p];
    // sg = sqrt(det)
    detb[p] += sgb[p] * 0.5 / sg[p];
    // det = g11 g22 - g12^2
    g11b[p] += detb[p] * g22[p];
    g22b[p] += detb[p] * g11[p];
    g12b[p] += -2.0 * detb[p] * g12[p];
    // metric from P, Q
    Pb.set_vec(p, Pb.vec_at(p) + (2.0 * g11b[p]) * P.vec_at(p) + g12b[p] * Q.vec_at(p));
    Qb.set_vec(p, Qb.vec_at(p) + (2.0 * g22b[p]) * Q.vec_at(p) + g12b[p] * P.vec_at(p));
  }

  // spectral adjoints back to Phi
  out.grad = VectorField(grid, 3);
  {
    VectorField t = sp.deriv_x(Pb);
    for (size_t k = 0; k < out.grad.data.size(); ++k) out.grad.data[k] -= t.data[k];
    t = sp.deriv_y(Qb);
    for (size_t k = 0; k < out.grad.data.size(); ++k) out.grad.data[k] -= t.data[k];
    VectorField axx, axy, ayy;
    sp.second_derivs(Pxxb, axx, axy, ayy);
    for (size_t k = 0; k < out.grad.data.size(); ++k) out.grad.data[k] += axx.data[k];
    sp.second_derivs(Pxyb, axx, axy, ayy);
    for (size_t k = 0; k < out.grad.data.size(); ++k) out.grad.data[k] += axy.data[k];
    sp.second_derivs(Pyyb, axx, axy, ayy);
    for (size_t k = 0; k < out.grad.data.size(); ++k) out.grad.data[k] += ayy.data[k];
  }
  return out;
}

double discrete_directional(const DiscreteEnergy& e, const VectorField& w) {
  double s = 0;
  for (size_t k = 0; k < w.data.size(); ++k) s += e.grad.data[k] * w.data[k];
  return s;
}

}  // namespace fel

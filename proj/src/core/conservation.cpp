#include "conservation.hpp"

namespace fel {

namespace {

void check_gauge(const GeometryCache& cache, double cap, const char* who) {
  require(cache.dim == 3, ErrorCode::invalid_argument, std::string(who) + ": m = 3 only");
  require(cache.conformality_residual <= cap, ErrorCode::gauge_failure,
          std::string(who) + ": non-conformal input, residual " + std::to_string(cache.conformality_residual));
}

// component fields of grad D (shared by build_D and identity_residual)
void grad_D_fields(const GeometryCache& cache, VectorField& gx, VectorField& gy) {
  gx = VectorField(cache.grid, 3);
  gy = VectorField(cache.grid, 3);
  for (int p = 0; p < cache.grid->size(); ++p) {
    const double e2l = std::exp(-2.0 * cache.lam.data[p]);
    const Vec phx = cache.phi_x.vec_at(p), phy = cache.phi_y.vec_at(p);
    gx.set_vec(p, e2l * (cross(phx, cache.II12.vec_at(p)) - cross(phy, cache.II11.vec_at(p))));
    gy.set_vec(p, e2l * (cross(phx, cache.II22.vec_at(p)) - cross(phy, cache.II12.vec_at(p))));
  }
}

}  // namespace

PotentialD build_D(const GeometryCache& cache, double conformality_cap) {
  check_gauge(cache, conformality_cap, "build_D");
  Spectral sp(cache.grid);
  PotentialD out;
  grad_D_fields(cache, out.grad_x, out.grad_y);

  VectorField cy = sp.deriv_y(out.grad_x);
  VectorField cx = sp.deriv_x(out.grad_y);
  double compat = 0;
  for (size_t k = 0; k < cy.data.size(); ++k) compat = std::max(compat, std::abs(cy.data[k] - cx.data[k]));
  out.compatibility = compat;

  // D per component: Delta D = div(grad D)
  out.D = VectorField(cache.grid, 3);
  for (int c = 0; c < 3; ++c) {
    ScalarField rhs = sp.divergence(out.grad_x.component(c), out.grad_y.component(c));
    ScalarField Dc = sp.poisson(rhs).phi;
    std::copy(Dc.data.begin(), Dc.data.end(), out.D.plane(c));
  }
  return out;
}

double identity_residual(const GeometryCache& cache, double conformality_cap) {
  check_gauge(cache, conformality_cap, "identity_residual");
  Spectral sp(cache.grid);
  // bracket fields of the identity: the lattice-direction fluxes of grad D
  VectorField fx(cache.grid, 3), fy(cache.grid, 3);
  for (int p = 0; p < cache.grid->size(); ++p) {
    const double e2l = std::exp(-2.0 * cache.lam.data[p]);
    const Vec phx = cache.phi_x.vec_at(p), phy = cache.phi_y.vec_at(p);
    fx.set_vec(p, e2l * (cross(phx, cache.II22.vec_at(p)) - cross(phy, cache.II12.vec_at(p))));
    fy.set_vec(p, e2l * (cross(phy, cache.II11.vec_at(p)) - cross(phx, cache.II12.vec_at(p))));
  }
  VectorField dx = sp.deriv_x(fx), dy = sp.deriv_y(fy);
  double r = 0;
  for (int p = 0; p < cache.grid->size(); ++p) {
    const double e2l = std::exp(-2.0 * cache.lam.data[p]);
    const Vec v = e2l * (dx.vec_at(p) + dy.vec_at(p));
    r = std::max(r, norm(v));
  }
  return r;
}

VectorField recover_stream(const Spectral& sp, const VectorField& VX, const VectorField& VY, double* defect,
                           double* harmonic) {
  const GridPtr grid = VX.grid;
  const int m = VX.dim;
  VectorField L(grid, m);
  VectorField vyx = sp.deriv_x(VY), vxy = sp.deriv_y(VX);
  for (int c = 0; c < m; ++c) {
    ScalarField curl(grid);
    for (int p = 0; p < grid->size(); ++p) curl.data[p] = vyx.at(c, p) - vxy.at(c, p);
    ScalarField Lc = sp.poisson(curl).phi;
    std::copy(Lc.data.begin(), Lc.data.end(), L.plane(c));
  }
  if (defect || harmonic) {
    VectorField Lx = sp.deriv_x(L), Ly = sp.deriv_y(L);
    double d = 0, h = 0;
    for (int c = 0; c < m; ++c) {
      double mx = 0, my = 0;
      for (int p = 0; p < grid->size(); ++p) {
        d = std::max(d, std::abs(-Ly.at(c, p) - VX.at(c, p)));
        d = std::max(d, std::abs(Lx.at(c, p) - VY.at(c, p)));
        mx += VX.at(c, p);
        my += VY.at(c, p);
      }
      h += sqr(mx) + sqr(my);
    }
    if (defect) *defect = d;
    if (harmonic) *harmonic = std::sqrt(h) / grid->size();
  }
  return L;
}

PotentialL build_L(const GeometryCache& cache, const Frame& frame, double el_threshold) {
  check_gauge(cache, kConformalityThreshold * 10, "build_L");
  PotentialL out;
  out.el_residual = el_residual_norm(cache, frame, kConformalityThreshold * 10);
  if (out.el_residual > el_threshold) {
    fail(ErrorCode::invalid_argument,
         "build_L: immersion is not approximately critical (EL residual " +
             std::to_string(out.el_residual) + " > " + std::to_string(el_threshold) + ")");
  }
  Spectral sp(cache.grid);
  auto fl = variation_flux(cache, frame, kConformalityThreshold * 10);
  out.L = recover_stream(sp, fl.VX, fl.VY, &out.defect, &out.harmonic);
  return out;
}

Potentials build_potentials(const GeometryCache& cache, const PotentialL& L, const PotentialD& D) {
  Spectral sp(cache.grid);
  const int n = cache.grid->size();
  Potentials out;

  VectorField Lx = sp.deriv_x(L.L), Ly = sp.deriv_y(L.L);

  // right sides
  ScalarField wsx(cache.grid), wsy(cache.grid);
  VectorField wrx(cache.grid, 3), wry(cache.grid, 3);
  for (int p = 0; p < n; ++p) {
    const Vec Lv = L.L.vec_at(p);
    const Vec phx = cache.phi_x.vec_at(p), phy = cache.phi_y.vec_at(p);
    wsx.data[p] = dot(Lv, phx);
    wsy.data[p] = dot(Lv, phy);
    const double lam_c = cache.lam.data[p] - cache.lam_bar;
    const double Hs = dot(cache.H.vec_at(p), cache.normal.vec_at(p));
    wrx.set_vec(p, cross(Lv, phx) + lam_c * D.grad_x.vec_at(p) + Hs * phx);
    wry.set_vec(p, cross(Lv, phy) + lam_c * D.grad_y.vec_at(p) + Hs * phy);
  }

  // integrability defects (curl of a gradient field vanishes)
  {
    ScalarField cx = sp.deriv_x(wsy), cy = sp.deriv_y(wsx);
    for (int p = 0; p < n; ++p) out.curl_S = std::max(out.curl_S, std::abs(cx.data[p] - cy.data[p]));
    VectorField rx = sp.deriv_x(wry), ry = sp.deriv_y(wrx);
    for (int p = 0; p < n; ++p) out.curl_R = std::max(out.curl_R, norm(rx.vec_at(p) - ry.vec_at(p)));
  }

  out.S = sp.poisson(sp.divergence(wsx, wsy)).phi;
  out.R = VectorField(cache.grid, 3);
  for (int c = 0; c < 3; ++c) {
    ScalarField rhs = sp.divergence(wrx.component(c), wry.component(c));
    ScalarField Rc = sp.poisson(rhs).phi;
    std::copy(Rc.data.begin(), Rc.data.end(), out.R.plane(c));
  }
  return out;
}

double delta_lambda_residual(const GeometryCache& cache, const Frame& frame) {
  Spectral sp(cache.grid);
  ScalarField lap = sp.laplace(cache.lam);
  VectorField e1x = sp.deriv_x(frame.e1), e1y = sp.deriv_y(frame.e1);
  VectorField e2x = sp.deriv_x(frame.e2), e2y = sp.deriv_y(frame.e2);
  double r = 0;
  for (int p = 0; p < cache.grid->size(); ++p) {
    // <grad_perp e1, grad e2> = -d_Y e1 . d_X e2 + d_X e1 . d_Y e2
    const double jac = -dot(e1y.vec_at(p), e2x.vec_at(p)) + dot(e1x.vec_at(p), e2y.vec_at(p));
    r = std::max(r, std::abs(lap.data[p] + jac));
  }
  return r;
}

SystemResiduals system_residuals(const GeometryCache& cache, const Frame& frame, const PotentialL& L,
                                 const PotentialD& D, const Potentials& pots) {
  Spectral sp(cache.grid);
  const int n = cache.grid->size();
  SystemResiduals out;

  out.identity1 = identity_residual(cache, kConformalityThreshold * 10);
  out.curlL = L.defect;
  out.curlS = pots.curl_S;
  out.curlR = pots.curl_R;
  out.deltaLambda_eq = delta_lambda_residual(cache, frame);

  ScalarField Sx, Sy;
  sp.grad(pots.S, Sx, Sy);
  VectorField Rx = sp.deriv_x(pots.R), Ry = sp.deriv_y(pots.R);
  VectorField nx = sp.deriv_x(cache.normal), ny = sp.deriv_y(cache.normal);

  // gradS_eq: grad S = -<grad_perp R, n> + (lam-lambar) <grad_perp D, n>
  // gradR_eq: grad R = n x grad_perp R + grad_perp S n + (lam-lambar) grad D
  //                    + (lam-lambar)(<grad_perp D, e2> e1 - <grad_perp D, e1> e2)
  ScalarField dsx_rhs(cache.grid), dsy_rhs(cache.grid);
  for (int p = 0; p < n; ++p) {
    const Vec nv = cache.normal.vec_at(p);
    const double lam_c = cache.lam.data[p] - cache.lam_bar;
    const Vec gpD_x = (-1.0) * D.grad_y.vec_at(p);  // grad_perp D, X-slot
    const Vec gpD_y = D.grad_x.vec_at(p);
    dsx_rhs.data[p] = -dot((-1.0) * Ry.vec_at(p), nv) + lam_c * dot(gpD_x, nv);
    dsy_rhs.data[p] = -dot(Rx.vec_at(p), nv) + lam_c * dot(gpD_y, nv);
    out.gradS_eq = std::max(out.gradS_eq, std::abs(Sx.data[p] - dsx_rhs.data[p]));
    out.gradS_eq = std::max(out.gradS_eq, std::abs(Sy.data[p] - dsy_rhs.data[p]));

    const Vec e1 = cache.t1.vec_at(p), e2 = cache.t2.vec_at(p);
    const Vec rX = cross(nv, (-1.0) * Ry.vec_at(p)) + (-Sy.data[p]) * nv + lam_c * D.grad_x.vec_at(p) +
                   lam_c * (dot(gpD_x, e2) * e1 - dot(gpD_x, e1) * e2);
    const Vec rY = cross(nv, Rx.vec_at(p)) + (Sx.data[p]) * nv + lam_c * D.grad_y.vec_at(p) +
                   lam_c * (dot(gpD_y, e2) * e1 - dot(gpD_y, e1) * e2);
    out.gradR_eq = std::max(out.gradR_eq, norm(Rx.vec_at(p) - rX));
    out.gradR_eq = std::max(out.gradR_eq, norm(Ry.vec_at(p) - rY));
  }

  // deltaS_eq: Delta S = -<grad_perp R, grad n> + div[(lam-lambar)<grad_perp D, n>]
  {
    ScalarField lapS = sp.laplace(pots.S);
    ScalarField px(cache.grid), py(cache.grid);
    for (int p = 0; p < n; ++p) {
      const Vec nv = cache.normal.vec_at(p);
      const double lam_c = cache.lam.data[p] - cache.lam_bar;
      px.data[p] = lam_c * dot((-1.0) * D.grad_y.vec_at(p), nv);
      py.data[p] = lam_c * dot(D.grad_x.vec_at(p), nv);
    }
    ScalarField divp = sp.divergence(px, py);
    for (int p = 0; p < n; ++p) {
      const double jacobian_term =
          -(-dot(Ry.vec_at(p), nx.vec_at(p)) + dot(Rx.vec_at(p), ny.vec_at(p)));
      out.deltaS_eq = std::max(out.deltaS_eq, std::abs(lapS.data[p] - jacobian_term - divp.data[p]));
    }
  }

  // deltaR_eq: Delta R = grad n x grad_perp R + grad_perp S grad n + div[...]
  {
    VectorField lapR(cache.grid, 3);
    for (int c = 0; c < 3; ++c) {
      ScalarField l = sp.laplace(pots.R.component(c));
      std::copy(l.data.begin(), l.data.end(), lapR.plane(c));
    }
    VectorField px(cache.grid, 3), py(cache.grid, 3);
    for (int p = 0; p < n; ++p) {
      const double lam_c = cache.lam.data[p] - cache.lam_bar;
      const Vec e1 = cache.t1.vec_at(p), e2 = cache.t2.vec_at(p);
      const Vec gpD_x = (-1.0) * D.grad_y.vec_at(p);
      const Vec gpD_y = D.grad_x.vec_at(p);
      px.set_vec(p, lam_c * D.grad_x.vec_at(p) + lam_c * (dot(gpD_x, e2) * e1 - dot(gpD_x, e1) * e2));
      py.set_vec(p, lam_c * D.grad_y.vec_at(p) + lam_c * (dot(gpD_y, e2) * e1 - dot(gpD_y, e1) * e2));
    }
    VectorField divx = sp.deriv_x(px), divy = sp.deriv_y(py);
    for (int p = 0; p < n; ++p) {
      const Vec jac = cross(nx.vec_at(p), (-1.0) * Ry.vec_at(p)) + cross(ny.vec_at(p), Rx.vec_at(p));
      const Vec sgrad = (-Sy.data[p]) * nx.vec_at(p) + Sx.data[p] * ny.vec_at(p);
      const Vec rhs = jac + sgrad + divx.vec_at(p) + divy.vec_at(p);
      out.deltaR_eq = std::max(out.deltaR_eq, norm(lapR.vec_at(p) - rhs));
    }
  }

  // deltaD_eq: harmonic defect of the recovered potential
  {
    VectorField lapD(cache.grid, 3);
    for (int c = 0; c < 3; ++c) {
      ScalarField l = sp.laplace(D.D.component(c));
      std::copy(l.data.begin(), l.data.end(), lapD.plane(c));
    }
    VectorField divgx = sp.deriv_x(D.grad_x), divgy = sp.deriv_y(D.grad_y);
    for (int p = 0; p < n; ++p)
      out.deltaD_eq = std::max(out.deltaD_eq, norm(lapD.vec_at(p) - divgx.vec_at(p) - divgy.vec_at(p)));
  }

  // deltaPhi_eq: [1-(lam-lambar)] Delta Phi = -<grad R x grad_perp Phi> - <grad S, grad_perp Phi>
  {
    VectorField lapPhi(cache.grid, 3);
    for (int c = 0; c < 3; ++c) {
      // Delta Phi from the cache second derivatives
      for (int p = 0; p < n; ++p) lapPhi.at(c, p) = cache.phi_xx.at(c, p) + cache.phi_yy.at(c, p);
    }
    for (int p = 0; p < n; ++p) {
      const double lam_c = cache.lam.data[p] - cache.lam_bar;
      const Vec phx = cache.phi_x.vec_at(p), phy = cache.phi_y.vec_at(p);
      const Vec rxp = cross(Rx.vec_at(p), (-1.0) * phy) + cross(Ry.vec_at(p), phx);
      const Vec sxp = Sx.data[p] * ((-1.0) * phy) + Sy.data[p] * phx;
      const Vec lhs = (1.0 - lam_c) * lapPhi.vec_at(p);
      out.deltaPhi_eq = std::max(out.deltaPhi_eq, norm(lhs + rxp + sxp));
    }
  }

  return out;
}

}  // namespace fel

#include "geometry.hpp"

namespace fel {

Vec GeometryCache::project_normal(int idx, const Vec& v) const {
  if (dim == 3) {
    const Vec n = normal.vec_at(idx);
    Vec r = n;
    r *= dot(v, n);
    return r;
  }
  const Vec a = t1.vec_at(idx), b = t2.vec_at(idx);
  Vec r = v;
  r -= dot(v, a) * a;
  r -= dot(v, b) * b;
  return r;
}

GeometryCache build_geometry(const Immersion& imm) {
  const auto chk = check_immersion(imm);
  require(chk.ok, ErrorCode::degenerate_input, "build_geometry: immersion floor violated (degenerate metric)");

  GeometryCache c;
  c.grid = imm.grid();
  c.dim = imm.dim();
  Spectral sp(c.grid);

  c.phi_x = sp.deriv_x(imm.phi);
  c.phi_y = sp.deriv_y(imm.phi);
  sp.second_derivs(imm.phi, c.phi_xx, c.phi_xy, c.phi_yy);

  const int n = c.grid->size();
  c.g11 = ScalarField(c.grid);
  c.g12 = ScalarField(c.grid);
  c.g22 = ScalarField(c.grid);
  c.det_g = ScalarField(c.grid);
  c.sqrt_g = ScalarField(c.grid);
  c.i11 = ScalarField(c.grid);
  c.i12 = ScalarField(c.grid);
  c.i22 = ScalarField(c.grid);
  c.lam = ScalarField(c.grid);
  c.t1 = VectorField(c.grid, c.dim);
  c.t2 = VectorField(c.grid, c.dim);
  if (c.dim == 3) c.normal = VectorField(c.grid, 3);
  c.II11 = VectorField(c.grid, c.dim);
  c.II12 = VectorField(c.grid, c.dim);
  c.II22 = VectorField(c.grid, c.dim);
  c.H = VectorField(c.grid, c.dim);

  for (int p = 0; p < n; ++p) {
    const Vec px = c.phi_x.vec_at(p), py = c.phi_y.vec_at(p);
    const double g11 = dot(px, px), g12 = dot(px, py), g22 = dot(py, py);
    const double det = g11 * g22 - g12 * g12;
    require(det > 0 && g11 > 0, ErrorCode::degenerate_input, "build_geometry: metric degeneracy");
    c.g11.data[p] = g11;
    c.g12.data[p] = g12;
    c.g22.data[p] = g22;
    c.det_g.data[p] = det;
    c.sqrt_g.data[p] = std::sqrt(det);
    c.i11.data[p] = g22 / det;
    c.i12.data[p] = -g12 / det;
    c.i22.data[p] = g11 / det;
    c.lam.data[p] = 0.5 * std::log(g11);

    // Gram-Schmidt tangents
    Vec e1 = px;
    e1 *= 1.0 / std::sqrt(g11);
    Vec f2 = py - dot(py, e1) * e1;
    const double q = norm(f2);
    require(q > 0, ErrorCode::degenerate_input, "build_geometry: metric degeneracy");
    Vec e2 = f2;
    e2 *= 1.0 / q;
    c.t1.set_vec(p, e1);
    c.t2.set_vec(p, e2);
    if (c.dim == 3) c.normal.set_vec(p, cross(e1, e2));
  }

  for (int p = 0; p < n; ++p) {
    c.II11.set_vec(p, c.project_normal(p, c.phi_xx.vec_at(p)));
    c.II12.set_vec(p, c.project_normal(p, c.phi_xy.vec_at(p)));
    c.II22.set_vec(p, c.project_normal(p, c.phi_yy.vec_at(p)));
    Vec h = c.i11.data[p] * c.II11.vec_at(p) + c.i22.data[p] * c.II22.vec_at(p) +
            (2.0 * c.i12.data[p]) * c.II12.vec_at(p);
    h *= 0.5;
    c.H.set_vec(p, h);
  }

  c.lam_bar = grid_mean(c.lam);

  const double gmax = max_abs(c.g11);
  double d_diag = 0, d_off = 0;
  for (int p = 0; p < n; ++p) {
    d_diag = std::max(d_diag, std::abs(c.g11.data[p] - c.g22.data[p]));
    d_off = std::max(d_off, std::abs(c.g12.data[p]));
  }
  c.conformality_residual = d_diag / gmax + d_off / gmax;
  return c;
}

Weingarten weingarten(const GeometryCache& cache, double conformality_cap) {
  require(cache.dim == 3, ErrorCode::invalid_argument, "weingarten: defined for m = 3");
  if (cache.conformality_residual > conformality_cap) {
    fail(ErrorCode::gauge_failure, "weingarten: non-conformal input, residual " +
                                       std::to_string(cache.conformality_residual));
  }
  const int n = cache.grid->size();
  Weingarten w;
  w.H0_re = ScalarField(cache.grid);
  w.H0_im = ScalarField(cache.grid);
  for (int p = 0; p < n; ++p) {
    const Vec nrm = cache.normal.vec_at(p);
    const double s11 = dot(cache.II11.vec_at(p), nrm);
    const double s12 = dot(cache.II12.vec_at(p), nrm);
    const double s22 = dot(cache.II22.vec_at(p), nrm);
    const double Hs = dot(cache.H.vec_at(p), nrm);
    const double e2l = std::exp(2.0 * cache.lam.data[p]);
    const double s0_11 = s11 - Hs * cache.g11.data[p];
    const double s0_22 = s22 - Hs * cache.g22.data[p];
    const double s0_12 = s12 - Hs * cache.g12.data[p];
    w.H0_re.data[p] = s0_11 / e2l;
    w.H0_im.data[p] = -s0_12 / e2l;
    w.consistency = std::max(w.consistency, std::abs(w.H0_re.data[p] + s0_22 / e2l));
  }
  return w;
}

double codazzi_residual(const GeometryCache& cache, double conformality_cap) {
  if (cache.conformality_residual > conformality_cap) {
    fail(ErrorCode::gauge_failure, "codazzi_residual: non-conformal input, residual " +
                                       std::to_string(cache.conformality_residual));
  }
  Spectral sp(cache.grid);
  const int n = cache.grid->size();

  if (cache.dim == 3) {
    ScalarField s0_11(cache.grid), s0_12(cache.grid), Hsc(cache.grid), e2l(cache.grid);
    for (int p = 0; p < n; ++p) {
      const Vec nrm = cache.normal.vec_at(p);
      const double s11 = dot(cache.II11.vec_at(p), nrm);
      const double s12 = dot(cache.II12.vec_at(p), nrm);
      const double s22 = dot(cache.II22.vec_at(p), nrm);
      s0_11.data[p] = 0.5 * (s11 - s22);
      s0_12.data[p] = s12;
      Hsc.data[p] = dot(cache.H.vec_at(p), nrm);
      e2l.data[p] = std::exp(2.0 * cache.lam.data[p]);
    }
    ScalarField ax = sp.deriv_x(s0_11), ay = sp.deriv_y(s0_11);
    ScalarField bx = sp.deriv_x(s0_12), by = sp.deriv_y(s0_12);
    ScalarField hx = sp.deriv_x(Hsc), hy = sp.deriv_y(Hsc);
    double r = 0;
    for (int p = 0; p < n; ++p) {
      r = std::max(r, std::abs(ax.data[p] + by.data[p] - e2l.data[p] * hx.data[p]));
      r = std::max(r, std::abs(ay.data[p] - bx.data[p] + e2l.data[p] * hy.data[p]));
    }
    return r;
  }

  // m = 4: vector-valued analogue on the trace-free part.
  VectorField v11(cache.grid, 4), v12(cache.grid, 4);
  ScalarField e2l(cache.grid);
  for (int p = 0; p < n; ++p) {
    Vec a = cache.II11.vec_at(p) - cache.II22.vec_at(p);
    a *= 0.5;
    v11.set_vec(p, a);
    v12.set_vec(p, cache.II12.vec_at(p));
    e2l.data[p] = std::exp(2.0 * cache.lam.data[p]);
  }
  VectorField ax = sp.deriv_x(v11), ay = sp.deriv_y(v11);
  VectorField bx = sp.deriv_x(v12), by = sp.deriv_y(v12);
  VectorField hx = sp.deriv_x(cache.H), hy = sp.deriv_y(cache.H);
  double r = 0;
  for (int p = 0; p < n; ++p) {
    for (int comp = 0; comp < 4; ++comp) {
      r = std::max(r, std::abs(ax.at(comp, p) + by.at(comp, p) - e2l.data[p] * hx.at(comp, p)));
      r = std::max(r, std::abs(ay.at(comp, p) - bx.at(comp, p) + e2l.data[p] * hy.at(comp, p)));
    }
  }
  return r;
}

ScalarField gauss_curvature(const GeometryCache& cache) {
  ScalarField K(cache.grid);
  for (int p = 0; p < K.size(); ++p) {
    K.data[p] = (dot(cache.II11.vec_at(p), cache.II22.vec_at(p)) -
                 dot(cache.II12.vec_at(p), cache.II12.vec_at(p))) /
                cache.det_g.data[p];
  }
  return K;
}

}  // namespace fel

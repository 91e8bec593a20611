#include "frame.hpp"

namespace fel {

FrameInvariants check_frame(const GeometryCache& cache, const Frame& frame) {
  FrameInvariants inv;
  const int n = cache.grid->size();
  double worst_orient = 1.0;
  for (int p = 0; p < n; ++p) {
    const Vec e1 = frame.e1.vec_at(p), e2 = frame.e2.vec_at(p);
    inv.unit_defect = std::max({inv.unit_defect, std::abs(norm(e1) - 1.0), std::abs(norm(e2) - 1.0)});
    inv.ortho_defect = std::max(inv.ortho_defect, std::abs(dot(e1, e2)));
    inv.tangency_defect = std::max({inv.tangency_defect, norm(cache.project_normal(p, e1)),
                                    norm(cache.project_normal(p, e2))});
    if (cache.dim == 3) {
      worst_orient = std::min(worst_orient, dot(cross(e1, e2), cache.normal.vec_at(p)));
    } else {
      // orientation against the Gram-Schmidt tangent pair
      const double det = dot(e1, cache.t1.vec_at(p)) * dot(e2, cache.t2.vec_at(p)) -
                         dot(e1, cache.t2.vec_at(p)) * dot(e2, cache.t1.vec_at(p));
      worst_orient = std::min(worst_orient, det);
    }
  }
  inv.oriented = worst_orient > 0;
  return inv;
}

Frame coordinate_frame(const GeometryCache& cache) {
  Frame f;
  f.e1 = cache.t1;
  f.e2 = cache.t2;
  f.origin = FrameOrigin::coordinate;
  return f;
}

Frame rotate_frame(const Frame& frame, const ScalarField& theta) {
  Frame out;
  const int n = theta.size();
  out.e1 = VectorField(frame.e1.grid, frame.e1.dim);
  out.e2 = VectorField(frame.e2.grid, frame.e2.dim);
  for (int p = 0; p < n; ++p) {
    const double ct = std::cos(theta.data[p]), st = std::sin(theta.data[p]);
    const Vec e1 = frame.e1.vec_at(p), e2 = frame.e2.vec_at(p);
    out.e1.set_vec(p, ct * e1 - st * e2);
    out.e2.set_vec(p, st * e1 + ct * e2);
  }
  out.origin = FrameOrigin::rotated;
  return out;
}

void connection_form(const GeometryCache& cache, const Frame& frame, ScalarField& a_x, ScalarField& a_y) {
  Spectral sp(cache.grid);
  VectorField e2x = sp.deriv_x(frame.e2);
  VectorField e2y = sp.deriv_y(frame.e2);
  a_x = ScalarField(cache.grid);
  a_y = ScalarField(cache.grid);
  const int n = cache.grid->size();
  for (int p = 0; p < n; ++p) {
    const Vec e1 = frame.e1.vec_at(p);
    a_x.data[p] = dot(e1, e2x.vec_at(p));
    a_y.data[p] = dot(e1, e2y.vec_at(p));
  }
}

CoulombResult coulomb_project(const GeometryCache& cache, const Frame& frame) {
  Spectral sp(cache.grid);
  ScalarField ax, ay;
  connection_form(cache, frame, ax, ay);

  ScalarField div_a = sp.divergence(ax, ay);
  for (auto& v : div_a.data) v = -v;
  auto ps = sp.poisson(div_a);

  CoulombResult res;
  res.theta = ps.phi;
  res.frame = rotate_frame(frame, res.theta);
  res.frame.origin = FrameOrigin::coulomb_projected;
  res.harmonic_part = std::hypot(grid_mean(ax), grid_mean(ay));

  ScalarField bx, by;
  connection_form(cache, res.frame, bx, by);
  res.residual = max_abs(sp.divergence(bx, by));
  return res;
}

// |omega|^2_g for a 1-form (omega_X, omega_Y) evaluated through the
// orthonormal directions t1 = d_X/|d_X Phi|, t2 = (d_Y - (g12/g11) d_X)/c.
namespace {
struct OrthoWeights {
  double inv_a;  // 1/sqrt(g11)
  double shear;  // g12/g11
  double inv_c;  // sqrt(g11)/sqrt(det g)
};
inline OrthoWeights ortho_weights(const GeometryCache& c, int p) {
  const double g11 = c.g11.data[p];
  return {1.0 / std::sqrt(g11), c.g12.data[p] / g11, std::sqrt(g11) / c.sqrt_g.data[p]};
}
inline double onorm2(const OrthoWeights& w, double ox, double oy) {
  const double u1 = ox * w.inv_a;
  const double u2 = (oy - w.shear * ox) * w.inv_c;
  return u1 * u1 + u2 * u2;
}
inline double onorm2(const OrthoWeights& w, const Vec& ox, const Vec& oy) {
  double s = 0;
  for (int c = 0; c < ox.dim; ++c) {
    const double u1 = ox[c] * w.inv_a;
    const double u2 = (oy[c] - w.shear * ox[c]) * w.inv_c;
    s += u1 * u1 + u2 * u2;
  }
  return s;
}
}  // namespace

double tangential_energy(const GeometryCache& cache, const Frame& frame) {
  ScalarField ax, ay;
  connection_form(cache, frame, ax, ay);
  ScalarField dens(cache.grid);
  for (int p = 0; p < dens.size(); ++p) {
    const auto w = ortho_weights(cache, p);
    dens.data[p] = 0.5 * onorm2(w, ax.data[p], ay.data[p]) * cache.sqrt_g.data[p];
  }
  return integrate(dens);
}

WillmoreResult willmore_energy(const GeometryCache& cache) {
  WillmoreResult res;
  ScalarField wd(cache.grid), qd(cache.grid);
  for (int p = 0; p < wd.size(); ++p) {
    wd.data[p] = dot(cache.H.vec_at(p), cache.H.vec_at(p)) * cache.sqrt_g.data[p];
    // |II|^2 through the orthonormal basis: S_ab = II(t_a, t_b)
    const auto w = ortho_weights(cache, p);
    const Vec T11 = cache.II11.vec_at(p), T12 = cache.II12.vec_at(p), T22 = cache.II22.vec_at(p);
    const Vec S11 = (w.inv_a * w.inv_a) * T11;
    const Vec S12 = (w.inv_a * w.inv_c) * (T12 - w.shear * T11);
    const Vec S22 = (w.inv_c * w.inv_c) * (T22 - 2.0 * w.shear * T12 + (w.shear * w.shear) * T11);
    const double ii2 = dot(S11, S11) + 2.0 * dot(S12, S12) + dot(S22, S22);
    qd.data[p] = 0.25 * ii2 * cache.sqrt_g.data[p];
  }
  res.W = integrate(wd);
  res.quarter_II2 = integrate(qd);
  res.gap = std::abs(res.quarter_II2 - res.W);
  return res;
}

EnergyBreakdown frame_energy(const GeometryCache& cache, const Frame& frame) {
  EnergyBreakdown b;
  Spectral sp(cache.grid);
  VectorField e1x = sp.deriv_x(frame.e1), e1y = sp.deriv_y(frame.e1);
  VectorField e2x = sp.deriv_x(frame.e2), e2y = sp.deriv_y(frame.e2);

  ScalarField dens(cache.grid);
  for (int p = 0; p < dens.size(); ++p) {
    const auto w = ortho_weights(cache, p);
    const double s = onorm2(w, e1x.vec_at(p), e1y.vec_at(p)) + onorm2(w, e2x.vec_at(p), e2y.vec_at(p));
    dens.data[p] = 0.25 * s * cache.sqrt_g.data[p];
  }
  b.F = integrate(dens);
  b.F_T = tangential_energy(cache, frame);
  const auto w = willmore_energy(cache);
  b.W = w.W;
  b.quarter_II2 = w.quarter_II2;
  b.decomposition_gap = std::abs(b.F - (b.F_T + b.quarter_II2));
  return b;
}

}  // namespace fel

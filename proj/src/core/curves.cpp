#include "curves.hpp"

namespace fel {

namespace {

void attach_arclength(LatticeCurve& c) {
  std::vector<Vec> d;
  curve_derivative(c.points, d);
  c.arclength.resize(c.points.size());
  double smin = std::numeric_limits<double>::infinity(), smax = 0;
  for (size_t p = 0; p < d.size(); ++p) {
    c.arclength[p] = norm(d[p]);
    smin = std::min(smin, c.arclength[p]);
    smax = std::max(smax, c.arclength[p]);
  }
  require(smin > 1e-8 * smax, ErrorCode::degenerate_input, "lattice curve: vanishing speed");
}

void orthonormalize_framing(LatticeCurve& c) {
  std::vector<Vec> d;
  curve_derivative(c.points, d);
  for (size_t p = 0; p < c.points.size(); ++p) {
    Vec t = d[p];
    t *= 1.0 / norm(t);
    Vec n = c.normals[p];
    n -= dot(n, t) * t;
    const double nn = norm(n);
    require(nn > 0.5, ErrorCode::degenerate_input, "lattice curve: degenerate framing");
    n *= 1.0 / nn;
    c.normals[p] = n;
  }
}

}  // namespace

LatticeCurve lattice_curve(const Immersion& imm, const GeometryCache& cache, CurveFamily family,
                           int offset_index) {
  const auto& g = *imm.grid();
  const bool framed = imm.dim() == 3;  // framing (for self-linking) needs the m=3 normal
  LatticeCurve c;
  c.family = family;
  if (family == CurveFamily::x_generator) {
    const int j = ((offset_index % g.n2()) + g.n2()) % g.n2();
    c.offset = g.b_of(j);
    c.points.resize(g.n1());
    if (framed) c.normals.resize(g.n1());
    for (int i = 0; i < g.n1(); ++i) {
      c.points[i] = imm.phi.vec_at(g.index(i, j));
      if (framed) c.normals[i] = cache.normal.vec_at(g.index(i, j));
    }
  } else {
    const int i = ((offset_index % g.n1()) + g.n1()) % g.n1();
    c.offset = g.a_of(i);
    c.points.resize(g.n2());
    if (framed) c.normals.resize(g.n2());
    for (int j = 0; j < g.n2(); ++j) {
      c.points[j] = imm.phi.vec_at(g.index(i, j));
      if (framed) c.normals[j] = cache.normal.vec_at(g.index(i, j));
    }
  }
  attach_arclength(c);
  if (framed) orthonormalize_framing(c);
  return c;
}

LatticeCurve wiggled_generator_curve(const Immersion& imm, const GeometryCache& cache, CurveFamily family,
                                     double offset, double amp, int samples) {
  require(imm.dim() == 3, ErrorCode::invalid_argument, "lattice_curve framing requires m = 3");
  Spectral sp(imm.grid());
  Interpolator phi_itp(sp, imm.phi);
  Interpolator nrm_itp(sp, cache.normal);

  LatticeCurve c;
  c.family = family;
  c.offset = offset;
  c.points.resize(samples);
  c.normals.resize(samples);
  for (int p = 0; p < samples; ++p) {
    const double t = static_cast<double>(p) / samples;
    const double w = offset + amp * std::cos(kTwoPi * t);
    const double a = (family == CurveFamily::x_generator) ? t : w;
    const double b = (family == CurveFamily::x_generator) ? w : t;
    c.points[p] = phi_itp.eval_vec(a, b);
    Vec n = nrm_itp.eval_vec(a, b);
    n *= 1.0 / norm(n);
    c.normals[p] = n;
  }
  attach_arclength(c);
  orthonormalize_framing(c);
  return c;
}

double fenchel_integral(const LatticeCurve& curve) {
  std::vector<Vec> d, dT;
  curve_derivative(curve.points, d);
  std::vector<Vec> T(d.size());
  for (size_t p = 0; p < d.size(); ++p) {
    T[p] = d[p];
    T[p] *= 1.0 / norm(d[p]);
  }
  curve_derivative(T, dT);
  // int k ds = int |dT/dt| dt with parameter period 1
  double acc = 0;
  for (const auto& v : dT) acc += norm(v);
  return acc / static_cast<double>(dT.size());
}

double embeddedness_margin(const LatticeCurve& curve) {
  const int n = static_cast<int>(curve.points.size());
  double len = 0;
  for (double s : curve.arclength) len += s;
  len /= n;  // total length (parameter period 1)
  const double step = len / n;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < n; ++p) {
    for (int q = p + 3; q < n; ++q) {
      if (n - (q - p) < 3) continue;  // cyclic distance
      best = std::min(best, norm(curve.points[p] - curve.points[q]));
    }
  }
  return best / step;
}

}  // namespace fel

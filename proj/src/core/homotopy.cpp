#include "homotopy.hpp"

namespace fel {

SelfLinking framing_self_linking(const LatticeCurve& curve) {
  const int n = static_cast<int>(curve.points.size());
  std::vector<Vec> d, dn;
  curve_derivative(curve.points, d);
  curve_derivative(curve.normals, dn);

  SelfLinking sl;
  // writhe: (1/4pi) oint oint (gamma'(u) x gamma'(v)) . (gamma(u)-gamma(v)) / |...|^3
  const double h = 1.0 / n;
  double wr = 0;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const Vec diff = curve.points[p] - curve.points[q];
      const double r = norm(diff);
      if (r < 1e-14) continue;
      wr += 2.0 * dot(cross(d[p], d[q]), diff) / (r * r * r);
    }
  }
  sl.writhe = wr * h * h / (4.0 * kPi);

  // twist: (1/2pi) oint n'(t) . (T x n) dt
  double tw = 0;
  for (int p = 0; p < n; ++p) {
    Vec T = d[p];
    T *= 1.0 / norm(d[p]);
    tw += dot(dn[p], cross(T, curve.normals[p]));
  }
  sl.twist = tw * h / (2.0 * kPi);

  sl.value = sl.writhe + sl.twist;
  sl.rounded = std::lround(sl.value);
  sl.margin = std::abs(sl.value - static_cast<double>(sl.rounded));
  sl.reliable = sl.margin < 0.3;
  return sl;
}

namespace {

struct GeneratorQ {
  int q = 0;
  double margin = 0;
  double wiggle = 0;
  long sl = 0;
  bool ok = false;
};

GeneratorQ q_on_generator(const Immersion& imm, const GeometryCache& cache, CurveFamily family) {
  const auto& g = *imm.grid();
  const int n_off = (family == CurveFamily::x_generator) ? g.n2() : g.n1();
  const int samples = std::max((family == CurveFamily::x_generator) ? g.n1() : g.n2(), 128);

  GeneratorQ best;
  for (int trial = 0; trial < 5; ++trial) {
    const int offset_index = (trial * n_off) / 7 + 1;
    LatticeCurve straight = lattice_curve(imm, cache, family, offset_index);
    double wiggle = 0.0;
    LatticeCurve curve = straight;
    if (embeddedness_margin(straight) < 1.0) {
      // image not embedded (e.g. a nodal cross-section): take a homologous
      // transverse wiggle; self-linking mod 2 does not depend on the choice
      for (double amp : {0.06, 0.1, 0.16}) {
        curve = wiggled_generator_curve(imm, cache, family, static_cast<double>(offset_index) / n_off, amp,
                                        samples);
        wiggle = amp;
        if (embeddedness_margin(curve) >= 1.0) break;
      }
      if (embeddedness_margin(curve) < 1.0) continue;
    }
    auto sl = framing_self_linking(curve);
    if (!sl.reliable) continue;
    GeneratorQ res;
    res.q = static_cast<int>(((sl.rounded + 1) % 2 + 2) % 2);
    res.margin = sl.margin;
    res.wiggle = wiggle;
    res.sl = sl.rounded;
    res.ok = true;
    if (!best.ok || res.margin < best.margin) best = res;
  }
  return best;
}

}  // namespace

ClassLabel classify(const Immersion& imm, const GeometryCache& cache) {
  require(imm.dim() == 3, ErrorCode::invalid_argument, "classify: regular homotopy classes are for m = 3");
  require(check_immersion(imm).ok, ErrorCode::degenerate_input, "classify: immersion floor violated");

  const GeneratorQ qa = q_on_generator(imm, cache, CurveFamily::x_generator);
  const GeneratorQ qb = q_on_generator(imm, cache, CurveFamily::tau_generator);
  require(qa.ok && qb.ok, ErrorCode::unreliable,
          "classify: self-linking unreliable on all candidate generator offsets");

  ClassLabel out;
  out.q[0] = qa.q;
  out.q[1] = qb.q;
  out.margins[0] = qa.margin;
  out.margins[1] = qb.margin;
  out.wiggle[0] = qa.wiggle;
  out.wiggle[1] = qb.wiggle;
  out.self_linking[0] = qa.sl;
  out.self_linking[1] = qb.sl;
  out.arf = (qa.q * qb.q) % 2;
  out.label = (out.arf == kStandardArf) ? "standard" : "nonstandard";
  return out;
}

}  // namespace fel

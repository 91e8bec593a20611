#pragma once

#include "geometry.hpp"

namespace fel {

// The two families of closed lattice curves: parallels of the (1,0) generator
// (fixed b-offset, parameter along a) and of the tau generator (fixed
// a-offset, parameter along b).
enum class CurveFamily { x_generator, tau_generator };

struct LatticeCurve {
  CurveFamily family = CurveFamily::x_generator;
  double offset = 0.0;             // complementary lattice coordinate in [0,1)
  std::vector<Vec> points;         // ambient samples, closed (last connects to first)
  std::vector<Vec> normals;        // surface framing along the curve (unit, orthogonal to tangent)
  std::vector<double> arclength;   // |dgamma/dt| per sample, parameter period 1
};

// Exact grid-line extraction (offset_index picks the row/column).
LatticeCurve lattice_curve(const Immersion& imm, const GeometryCache& cache, CurveFamily family,
                           int offset_index);

// Same homology class with a transverse wiggle: the complementary coordinate
// follows offset + amp*cos(2 pi t). Used when the straight line's image is not
// embedded; resampled band-limited.
LatticeCurve wiggled_generator_curve(const Immersion& imm, const GeometryCache& cache, CurveFamily family,
                                     double offset, double amp, int samples);

// Total curvature of a closed immersed curve via spectral differentiation in
// the curve parameter; at least 2 pi for any closed immersed curve.
double fenchel_integral(const LatticeCurve& curve);

// min over sample pairs at cyclic parameter distance >= 3 of the chord,
// normalized by the local step; used to detect non-embedded images.
double embeddedness_margin(const LatticeCurve& curve);

}  // namespace fel

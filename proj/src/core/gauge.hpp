#pragma once

#include "geometry.hpp"

namespace fel {

struct GaugeResult {
  Immersion immersion;
  double residual_before = 0.0;
  double residual_after = 0.0;
  ModuliPoint tau;              // reduced lattice of the output grid
  bool changed = false;         // false when the input already met the target
  int outer_iterations = 0;
};

// Reparameterizes the immersion (torus diffeomorphism plus lattice update) so
// the pullback metric is conformal: solves the Beltrami equation for the
// metric's dilatation spectrally, normalizes the new periods, reduces the
// lattice to the strip, and resamples the same band-limited immersion on the
// new grid. The image is unchanged up to interpolation error. Throws when the
// target is unreachable (the achievable residual is limited by the grid's
// resolution of the state) unless best_effort is set, in which case the best
// state reached is returned.
GaugeResult restore_conformal_gauge(const Immersion& imm, double target = kConformalityThreshold,
                                    double hard_cap = 0.5, int max_outer = 8, bool best_effort = false);

}  // namespace fel

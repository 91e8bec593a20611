#pragma once

#include <cstdint>
#include <string>

#include "grid.hpp"
#include "spectral.hpp"

namespace fel {

// Samples of an immersion Phi: Sigma -> R^m on a periodic grid.
struct Immersion {
  VectorField phi;
  std::string label;

  int dim() const { return phi.dim; }
  const GridPtr& grid() const { return phi.grid; }
};

struct ImmersionCheck {
  double min_singular = 0.0;  // min over grid of the smaller singular value of dPhi
  double max_singular = 0.0;
  bool ok = false;
};

// Weak-immersion floor: smallest singular value of dPhi (flat coordinates)
// must stay above rel_floor times the largest one anywhere on the grid.
ImmersionCheck check_immersion(const Immersion& imm, double rel_floor = 1e-3);

// Clifford torus S^1 x S^1 in R^4 on the square lattice.
Immersion clifford(GridPtr grid);

// Torus of revolution (radii R > r > 0) in conformal parameterization; the
// grid lattice must match the conformal class tau = (0, r/sqrt(R^2-r^2)).
Immersion rotational_conformal(double R, double r, GridPtr grid, double tau_tol = 1e-6);
double rotational_conformal_tau2(double R, double r);
double rotational_willmore_closed_form(double R, double r);

// Immersed (non-embedded) torus: planar figure-eight cross-section
// scale*(sin v, sin 2v) swept around the unit circle while the cross-section
// plane spins by one full turn per revolution.
Immersion twisted_figure_eight(GridPtr grid, double scale);

// Base plus a seeded random real trigonometric polynomial per ambient
// coordinate (modes up to max_mode); amplitude is halved up to 8 times if the
// immersion floor fails.
Immersion fourier_perturb(const Immersion& base, uint64_t seed, double amplitude, int max_mode);

// Pointwise affine map x -> scale * rotation * x + translation.
Immersion transform(const Immersion& imm, double scale, const std::vector<double>& rotation_rowmajor,
                    const Vec& translation);

}  // namespace fel

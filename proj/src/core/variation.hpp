#pragma once

#include "frame.hpp"

namespace fel {

// Flux density V with div(V) = 0 at critical points; V = V_W + V_T where
//   V_W = 1/2 (grad Hvec - 3 grad H n + grad_perp n x Hvec)
//   V_T = -II contracted with (e2 . grad_perp e1)
//         - (e2 . grad_perp e1) (e2 . grad e1, grad Phi)_g
//         + 1/2 |e2 . grad e1|_g^2 grad_perp Phi
// in conformal gauge with the coordinate frame (m = 3). Components along X, Y.
struct VariationFlux {
  VectorField VX, VY;          // total flux V
  VectorField VX_T, VY_T;      // tangential part only
  VectorField VX_W, VY_W;      // Willmore part only
};
VariationFlux variation_flux(const GeometryCache& cache, const Frame& frame,
                             double conformality_cap = kConformalityThreshold);

// First variations against a perturbation field w (flat Lebesgue pairing).
double first_variation_FT(const GeometryCache& cache, const Frame& frame, const VectorField& w);
double first_variation_W(const GeometryCache& cache, const VectorField& w);
double first_variation_F(const GeometryCache& cache, const Frame& frame, const VectorField& w);

// Euler-Lagrange density div(V) and its discrete L2 norm.
VectorField el_density(const GeometryCache& cache, const Frame& frame,
                       double conformality_cap = kConformalityThreshold);
double el_residual_norm(const GeometryCache& cache, const Frame& frame,
                        double conformality_cap = kConformalityThreshold);

// Discrete descent energy E(Phi) = F_T(coulomb-projected frame) + 1/4 int |II|^2
// as a plain function of the grid samples, with its exact gradient (reverse
// accumulation through the whole pipeline including the Coulomb solve). m = 3.
struct DiscreteEnergy {
  double value = 0.0;
  double F_T = 0.0;
  double quarter_II2 = 0.0;
  double conformality_residual = 0.0;
  VectorField grad;  // dE / dPhi(grid value); empty when with_gradient = false
};
DiscreteEnergy discrete_energy(const Immersion& imm, bool with_gradient);

// Directional derivative of the discrete energy from the exact gradient.
double discrete_directional(const DiscreteEnergy& e, const VectorField& w);

}  // namespace fel

#pragma once

#include "curves.hpp"
#include "frame.hpp"

namespace fel {

inline constexpr double kBoundVerdictSlack = 1e-6;

// f(tau2, theta) = (tau2 + 1/tau2) * sin^2(theta) / (sin^2(theta) + cos^4(theta))
double f_moduli(double tau2, double theta);

struct OmegaMembership {
  bool member = false;
  double boundary_distance = 0.0;  // signed: positive inside the disk
};
// Region where the Willmore bound 2 pi^2 was classically known, mirrored to
// tau1 >= 0 first: (|tau1| - 1/2)^2 + (tau2 - 1)^2 <= 1/4.
OmegaMembership in_omega_LYMR(const ModuliPoint& tau);

// Left side of the lattice-curve estimate for a conformal immersion with its
// coordinate frame:
//   int e^{-4 lam} [ (1 + cos^4 t/sin^2 t) |II11|^2 + sin^2 t |II22|^2
//                    + 4 cos^2 t |II12|^2 ]
//     + [ (1 + cot^2 t) (d_{e1}e1 . e2)^2 + (d_{e2}e2 . e1)^2 ] dvol,
// with t = arccos(tau1) of the reduced lattice.
double bound_lhs_LB0(const GeometryCache& cache, const Frame& frame, const ModuliPoint& tau,
                     double conformality_cap = kConformalityThreshold);

struct IntermediateBounds {
  double e1_curvature_integral = 0.0;  // int |d_{e1} e1|^2 dvol  (>= 4 pi^2 tau2)
  double e2theta_integral = 0.0;       // (1/sin^2 t) int |d_{e2t} e2t|^2 dvol  (>= 4 pi^2 / tau2)
};
IntermediateBounds intermediate_bounds(const GeometryCache& cache, const Frame& frame, const ModuliPoint& tau,
                                       double conformality_cap = kConformalityThreshold);

struct BoundReport {
  double F = 0.0;
  double F_T = 0.0;
  double W = 0.0;
  double lhs_LB0 = 0.0;
  double rhs_LB0 = 0.0;   // 4 pi^2 (tau2 + 1/tau2)
  double f_value = 0.0;
  double tau1 = 0.0, tau2 = 0.0, theta = 0.0;
  bool in_omega = false;
  double omega_distance = 0.0;
  std::string branch;     // "willmore_bound_inside_omega" | "moduli_function_bound"
  double fenchel_min = 0.0;
  bool lb0_ok = false;    // lhs_LB0 >= rhs_LB0 (1 - slack)
  bool fenchel_ok = false;
  bool verdict = false;   // F >= 2 pi^2 (1 - slack)
};

// Full lower-bound report for a conformal immersion (coordinate frame,
// lattice reduced to the strip). Curves are sampled on `curve_offsets`
// offsets per family for the Fenchel check.
BoundReport verify_theorem_LB(const Immersion& imm, const GeometryCache& cache, const Frame& frame,
                              int curve_offsets = 8);

}  // namespace fel

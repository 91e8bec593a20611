#pragma once

#include "variation.hpp"

namespace fel {

// Threshold under which an immersion counts as approximately critical
// (discrete L2 norm of the EL density).
inline constexpr double kCriticalElThreshold = 1e-3;

struct PotentialD {
  VectorField grad_x, grad_y;    // grad D assembled pointwise from II and gradPhi
  VectorField D;                 // zero-mean potential recovered by Poisson solves
  double compatibility = 0.0;    // max |d_Y(grad_x) - d_X(grad_y)| (mixed partials)
};
// grad D = e^{-2 lam} (Phi_X x II_12 - Phi_Y x II_11, Phi_X x II_22 - Phi_Y x II_12);
// integrable up to the compatibility defect, m = 3 conformal gauge.
PotentialD build_D(const GeometryCache& cache, double conformality_cap = kConformalityThreshold);

// Max-norm of the universal identity
//   e^{-2lam} d_X [e^{-2lam}(Phi_X x II22 - Phi_Y x II12)]
// + e^{-2lam} d_Y [e^{-2lam}(-Phi_X x II12 + Phi_Y x II11)] = 0.
double identity_residual(const GeometryCache& cache, double conformality_cap = kConformalityThreshold);

struct PotentialL {
  VectorField L;                 // zero-mean, grad_perp L ~ V in least squares
  double defect = 0.0;           // |grad_perp L - V|_inf
  double harmonic = 0.0;         // norm of the mean of V (cannot be matched)
  double el_residual = 0.0;      // gate value that admitted the construction
};

// Least-squares stream recovery: zero-mean L with grad_perp L ~ (VX, VY),
// solved per component as Delta L = curl V. Exact for divergence-free,
// mean-free V.
VectorField recover_stream(const Spectral& sp, const VectorField& VX, const VectorField& VY,
                           double* defect = nullptr, double* harmonic = nullptr);
// Refuses unless the EL residual is below `el_threshold` (the construction is
// only meaningful near critical points).
PotentialL build_L(const GeometryCache& cache, const Frame& frame,
                   double el_threshold = kCriticalElThreshold);

struct Potentials {
  ScalarField S;                 // zero mean
  VectorField R;                 // zero mean per component
  double curl_S = 0.0;           // integrability defect of grad S = <L, gradPhi>
  double curl_R = 0.0;           // integrability defect of the R right side
};
// grad S = <L, gradPhi>; grad R = L x gradPhi + (lam - lambar) grad D + H gradPhi.
Potentials build_potentials(const GeometryCache& cache, const PotentialL& L, const PotentialD& D);

struct SystemResiduals {
  double identity1 = 0.0;     // universal identity
  double curlL = 0.0;         // |grad_perp L - V|
  double curlS = 0.0;
  double curlR = 0.0;
  double gradS_eq = 0.0;      // grad S = -<grad_perp R, n> + (lam-lambar)<grad_perp D, n>
  double gradR_eq = 0.0;      // grad R = n x grad_perp R + grad_perp S n + (lam-lambar)(...)
  double deltaS_eq = 0.0;
  double deltaR_eq = 0.0;
  double deltaD_eq = 0.0;     // harmonic defect of the recovered D
  double deltaPhi_eq = 0.0;   // [1-(lam-lambar)] Delta Phi + <grad R x grad_perp Phi> + <grad S, grad_perp Phi>
  double deltaLambda_eq = 0.0;  // Delta lam + <grad_perp e1, grad e2> (unconditional)
};
SystemResiduals system_residuals(const GeometryCache& cache, const Frame& frame, const PotentialL& L,
                                 const PotentialD& D, const Potentials& pots);

// The unconditional Delta-lambda residual alone (any conformal immersion).
double delta_lambda_residual(const GeometryCache& cache, const Frame& frame);

}  // namespace fel

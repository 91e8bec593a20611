#pragma once

#include "immersion.hpp"

namespace fel {

inline constexpr double kConformalityThreshold = 1e-6;

// Pointwise differential geometry of an immersion in flat coordinates (X,Y)
// of the fundamental parallelogram.
struct GeometryCache {
  GridPtr grid;
  int dim = 3;

  VectorField phi_x, phi_y;
  VectorField phi_xx, phi_xy, phi_yy;

  ScalarField g11, g12, g22;
  ScalarField det_g, sqrt_g;
  ScalarField i11, i12, i22;  // inverse metric

  ScalarField lam;   // conformal factor log|d_X Phi|
  double lam_bar = 0.0;

  VectorField normal;    // unit normal (m=3 only)
  VectorField t1, t2;    // orthonormal tangent pair (Gram-Schmidt of phi_x, phi_y)

  VectorField II11, II12, II22;  // ambient-valued second fundamental form
  VectorField H;                 // mean curvature vector

  double conformality_residual = 0.0;  // |g11-g22|_inf/|g11|_inf + |g12|_inf/|g11|_inf

  // normal-space projector (uses the normal for m=3, Id - tangent projector for m=4)
  Vec project_normal(int idx, const Vec& v) const;
};

GeometryCache build_geometry(const Immersion& imm);

// Trace-free Weingarten components in conformal gauge (m=3):
//   H0_re = e^{-2 lam} II0_11,  H0_im = -e^{-2 lam} II0_12.
// Rejects inputs whose conformality residual exceeds the cap.
struct Weingarten {
  ScalarField H0_re, H0_im;
  double consistency = 0.0;  // max |H0_re + e^{-2 lam} II0_22|
};
Weingarten weingarten(const GeometryCache& cache, double conformality_cap = kConformalityThreshold);

// Max-norm of the two Codazzi residuals in conformal gauge; m=3 uses the
// scalar form, m=4 the vector-valued analogue.
double codazzi_residual(const GeometryCache& cache, double conformality_cap = kConformalityThreshold);

// Gauss curvature from the second fundamental form; integrates to ~0 on tori.
ScalarField gauss_curvature(const GeometryCache& cache);

}  // namespace fel

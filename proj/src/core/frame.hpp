#pragma once

#include "geometry.hpp"

namespace fel {

enum class FrameOrigin { coordinate, rotated, coulomb_projected };

// Orthonormal positively oriented tangent frame sampled on the grid.
struct Frame {
  VectorField e1, e2;
  FrameOrigin origin = FrameOrigin::coordinate;
};

struct FrameInvariants {
  double unit_defect = 0.0;       // max | |e_k| - 1 |
  double ortho_defect = 0.0;      // max |e1.e2|
  double tangency_defect = 0.0;   // max |pi_n(e_k)| / |e_k|
  bool oriented = false;          // e1 x e2 = n (m=3) / positive Gram orientation (m=4)
};
FrameInvariants check_frame(const GeometryCache& cache, const Frame& frame);

// Coordinate frame e_j = d_j Phi / |d_j Phi| in conformal gauge; Gram-Schmidt
// variant (tagged the same) otherwise.
Frame coordinate_frame(const GeometryCache& cache);

// Pointwise tangent-plane rotation: e1' = cos(t) e1 - sin(t) e2, e2' = sin(t) e1 + cos(t) e2.
// The connection transforms as e1.de2 -> e1.de2 + dt.
Frame rotate_frame(const Frame& frame, const ScalarField& theta);

struct CoulombResult {
  Frame frame;
  ScalarField theta;          // applied rotation, zero mean
  double residual = 0.0;      // |div(e1'.grad e2')|_inf of the output
  double harmonic_part = 0.0; // norm of the mean of e1.grad e2 (cannot be rotated away)
};
// Rotates the frame by the zero-mean theta solving the first-order condition
// of min F_T over rotations (flat Coulomb condition).
CoulombResult coulomb_project(const GeometryCache& cache, const Frame& frame);

// Connection one-form alpha_i = e1 . d_i e2 in flat coordinates.
void connection_form(const GeometryCache& cache, const Frame& frame, ScalarField& a_x, ScalarField& a_y);

// F_T = 1/2 int g^{ij} alpha_i alpha_j dvol_g
double tangential_energy(const GeometryCache& cache, const Frame& frame);

struct WillmoreResult {
  double W = 0.0;             // int |H|^2 dvol_g
  double quarter_II2 = 0.0;   // 1/4 int |II|^2 dvol_g
  double gap = 0.0;           // |quarter_II2 - W|  (Gauss-Bonnet on tori)
};
WillmoreResult willmore_energy(const GeometryCache& cache);

struct EnergyBreakdown {
  double F = 0.0;             // 1/4 int |d e|^2 dvol_g, computed directly
  double F_T = 0.0;
  double W = 0.0;
  double quarter_II2 = 0.0;
  double decomposition_gap = 0.0;  // |F - (F_T + quarter_II2)|
};
EnergyBreakdown frame_energy(const GeometryCache& cache, const Frame& frame);

}  // namespace fel

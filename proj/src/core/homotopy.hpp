#pragma once

#include "curves.hpp"
#include "frame.hpp"

namespace fel {

struct SelfLinking {
  double writhe = 0.0;
  double twist = 0.0;
  double value = 0.0;   // writhe + twist
  long rounded = 0;
  double margin = 0.0;  // 0.5 - |value - rounded|... stored as |value - rounded|
  bool reliable = false;
};

// Self-linking of a framed closed curve via writhe (Gauss double integral,
// diagonal-excluded trapezoid) plus framing twist; reliable when the rounding
// margin is below 0.3.
SelfLinking framing_self_linking(const LatticeCurve& curve);

struct ClassLabel {
  int arf = 0;                   // q(a) * q(b) in Z_2
  std::string label;             // "standard" | "nonstandard"
  int q[2] = {0, 0};             // on the (1,0) and tau generators
  double margins[2] = {0, 0};
  double wiggle[2] = {0, 0};     // transverse amplitude needed for an embedded representative
  long self_linking[2] = {0, 0};
};

// Calibration constant: the convention q = (self-linking + 1) mod 2 gives
// arf = 1 on the rotational torus, which is anchored to "standard".
inline constexpr int kStandardArf = 1;

ClassLabel classify(const Immersion& imm, const GeometryCache& cache);

}  // namespace fel

#include "core/homotopy.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace fel;
using namespace fel::testing;

namespace {

LatticeCurve planar_circle(int n, int framing_turns) {
  LatticeCurve c;
  c.points.resize(n);
  c.normals.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    c.points[i] = Vec(std::cos(t), std::sin(t), 0.0);
    if (framing_turns == 0) {
      c.normals[i] = Vec(std::cos(t), std::sin(t), 0.0);  // constant in-plane (radial) framing
    } else {
      // framing rotating framing_turns times around the tangent
      const double ph = framing_turns * t;
      const Vec radial(std::cos(t), std::sin(t), 0.0);
      const Vec vertical(0, 0, 1);
      c.normals[i] = std::cos(ph) * radial + std::sin(ph) * vertical;
    }
    c.arclength.push_back(kTwoPi);
  }
  return c;
}

}  // namespace

TEST_CASE("self-linking of a planar circle with in-plane framing is zero") {
  auto sl = framing_self_linking(planar_circle(64, 0));
  CHECK(std::abs(sl.writhe) < 1e-10);
  CHECK(std::abs(sl.twist) < 1e-10);
  CHECK(sl.rounded == 0);
  CHECK(sl.reliable);
}

TEST_CASE("self-linking of a circle with once-rotating framing is -1 (orientation pin)") {
  // Orientation convention pinned here: with the twist rate n' . (T x n), a
  // framing rotating from radial toward +z along the counterclockwise circle
  // carries twist -1; the mirror framing carries +1.
  auto sl = framing_self_linking(planar_circle(64, 1));
  CHECK(std::abs(sl.writhe) < 1e-10);
  CHECK(sl.twist == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(sl.rounded == -1);

  auto sl2 = framing_self_linking(planar_circle(64, -1));
  CHECK(sl2.rounded == 1);
}

TEST_CASE("meridian self-linking of the rotational torus is stable under refinement") {
  long prev = -999;
  for (int n : {32, 64, 128}) {
    auto imm = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, n));
    auto cache = build_geometry(imm);
    auto c = lattice_curve(imm, cache, CurveFamily::tau_generator, n / 3);
    auto sl = framing_self_linking(c);
    CHECK(sl.reliable);
    if (prev != -999) CHECK(sl.rounded == prev);
    prev = sl.rounded;
  }
  CHECK(prev == 0);  // planar meridian with in-plane surface framing
}

TEST_CASE("rotational torus classifies as standard (calibration anchor)") {
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, 64));
  auto cache = build_geometry(imm);
  auto lab = classify(imm, cache);
  CHECK(lab.label == "standard");
  CHECK(lab.arf == kStandardArf);
  CHECK(lab.q[0] == 1);
  CHECK(lab.q[1] == 1);
}

TEST_CASE("twisted figure-eight classifies as nonstandard") {
  auto imm = twisted_figure_eight(square_grid(64), 0.35);
  auto cache = build_geometry(imm);
  auto lab = classify(imm, cache);
  CHECK(lab.label == "nonstandard");
  CHECK(lab.arf != kStandardArf);
}

TEST_CASE("class label is stable under small perturbations") {
  auto base = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, 64));
  for (uint64_t seed : {31ull, 32ull}) {
    auto imm = fourier_perturb(base, seed, 0.02, 3);
    auto cache = build_geometry(imm);
    CHECK(classify(imm, cache).label == "standard");
  }
}

TEST_CASE("class label is invariant under rigid motion and scaling") {
  auto base = twisted_figure_eight(square_grid(64), 0.35);
  auto moved = transform(base, 2.0, random_rotation(3, 12), Vec(0.5, 1.5, -2.0));
  auto cache = build_geometry(moved);
  CHECK(classify(moved, cache).label == "nonstandard");
}

TEST_CASE("class label is invariant under generator offset choice") {
  // classify() already samples 5 offsets internally and cross-checks margins;
  // here we re-run the self-linking on explicit distinct offsets.
  auto imm = rotational_conformal(2.0, 1.0, rotational_grid(2.0, 1.0, 64));
  auto cache = build_geometry(imm);
  long first = -999;
  for (int off : {1, 13, 27, 41, 55}) {
    auto c = lattice_curve(imm, cache, CurveFamily::x_generator, off);
    auto sl = framing_self_linking(c);
    CHECK(sl.reliable);
    if (first == -999) first = sl.rounded;
    CHECK(sl.rounded == first);
  }
}

TEST_CASE("class label is stable under grid doubling") {
  for (int n : {64, 128}) {
    auto imm = twisted_figure_eight(square_grid(n), 0.35);
    auto cache = build_geometry(imm);
    CHECK(classify(imm, cache).label == "nonstandard");
  }
}

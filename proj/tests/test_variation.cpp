#include <random>

#include "core/descent.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace fel;
using namespace fel::testing;

namespace {

VectorField random_direction(const GridPtr& g, uint64_t seed, int kmax, int dim = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField w(g, dim);
  for (int c = 0; c < dim; ++c) {
    for (int k = -kmax; k <= kmax; ++k)
      for (int l = -kmax; l <= kmax; ++l) {
        if (k < 0 || (k == 0 && l < 0)) continue;
        const double ca = u(rng), cb = u(rng);
        for (int j = 0; j < g->n2(); ++j)
          for (int i = 0; i < g->n1(); ++i) {
            const double ph = kTwoPi * (k * g->a_of(i) + l * g->b_of(j));
            w.at(c, g->index(i, j)) += ca * std::cos(ph) + cb * std::sin(ph);
          }
      }
  }
  const double mx = max_abs(w);
  for (auto& v : w.data) v /= mx;
  return w;
}

Immersion displaced(const Immersion& base, const VectorField& w, double t) {
  Immersion out = base;
  for (size_t k = 0; k < out.phi.data.size(); ++k) out.phi.data[k] += t * w.data[k];
  return out;
}

}  // namespace

TEST_CASE("discrete energy gradient matches directional finite differences") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 32);
  auto base = fourier_perturb(rotational_conformal(std::sqrt(2.0), 1.0, g), 3, 0.02, 2);
  auto e = discrete_energy(base, true);
  for (uint64_t seed : {41ull, 42ull, 43ull}) {
    auto w = random_direction(g, seed, 3);
    const double analytic = discrete_directional(e, w);
    const double fd = richardson_fd([&](double t) { return discrete_energy(displaced(base, w, t), false).value; }, 1e-4);
    CHECK(std::abs(analytic - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("discrete energy gradient: per-coefficient finite differences") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 32);
  auto base = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto e = discrete_energy(base, true);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int c = static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % 4);
    const int l = static_cast<int>(rng() % 4);
    const bool use_cos = (rng() & 1) != 0;
    VectorField w(g, 3);
    for (int j = 0; j < g->n2(); ++j)
      for (int i = 0; i < g->n1(); ++i) {
        const double ph = kTwoPi * (k * g->a_of(i) + l * g->b_of(j));
        w.at(c, g->index(i, j)) = use_cos ? std::cos(ph) : std::sin(ph);
      }
    const double analytic = discrete_directional(e, w);
    const double fd = richardson_fd([&](double t) { return discrete_energy(displaced(base, w, t), false).value; }, 1e-4);
    CHECK(std::abs(analytic - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("first variation of F_T: translations are in the kernel") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  auto fr = coordinate_frame(cache);
  VectorField w(g, 3);
  for (int p = 0; p < g->size(); ++p) w.set_vec(p, Vec(0.3, -1.0, 0.7));
  CHECK(std::abs(first_variation_FT(cache, fr, w)) < 1e-10);
  CHECK(std::abs(first_variation_W(cache, w)) < 1e-10);
}

TEST_CASE("first variation of F: dilation direction is in the kernel") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  auto fr = coordinate_frame(cache);
  const double scale = max_abs(imm.phi);
  VectorField w = imm.phi;
  for (auto& v : w.data) v /= scale;
  const double dF = first_variation_F(cache, fr, w);
  CHECK(std::abs(dF) < 1e-6);
}

TEST_CASE("first variation of W: rotation generators are in the kernel") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  // w = A Phi with antisymmetric A
  VectorField w(g, 3);
  for (int p = 0; p < g->size(); ++p) {
    const Vec x = imm.phi.vec_at(p);
    w.set_vec(p, Vec(0.4 * x[1] - 0.2 * x[2], -0.4 * x[0] + 0.9 * x[2], 0.2 * x[0] - 0.9 * x[1]));
  }
  const double scale = max_abs(w);
  for (auto& v : w.data) v /= scale;
  CHECK(std::abs(first_variation_W(cache, w)) < 1e-8);
  auto fr = coordinate_frame(cache);
  CHECK(std::abs(first_variation_F(cache, fr, w)) < 1e-8);
}

TEST_CASE("analytic dF_T matches finite differences with Coulomb re-projection") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  auto fr = coordinate_frame(cache);
  for (uint64_t seed : {51ull, 52ull}) {
    auto w = random_direction(g, seed, 3);
    const double analytic = first_variation_FT(cache, fr, w);
    const double fd =
        richardson_fd([&](double t) { return discrete_energy(displaced(imm, w, t), false).F_T; }, 1e-3);
    CHECK(std::abs(analytic - fd) < 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("analytic dW matches finite differences") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  for (uint64_t seed : {61ull, 62ull}) {
    auto w = random_direction(g, seed, 3);
    const double analytic = first_variation_W(cache, w);
    const double fd = richardson_fd(
        [&](double t) { return willmore_energy(build_geometry(displaced(imm, w, t))).W; }, 1e-3);
    CHECK(std::abs(analytic - fd) < 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("analytic dF matches finite differences of the discrete energy") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  auto fr = coordinate_frame(cache);
  for (uint64_t seed : {71ull, 72ull}) {
    auto w = random_direction(g, seed, 3);
    const double analytic = first_variation_F(cache, fr, w);
    const double fd =
        richardson_fd([&](double t) { return discrete_energy(displaced(imm, w, t), false).value; }, 1e-3);
    CHECK(std::abs(analytic - fd) < 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("EL density agrees with the exact discrete gradient on band-limited directions") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 64);
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, g);
  auto cache = build_geometry(imm);
  auto fr = coordinate_frame(cache);
  auto e = discrete_energy(imm, true);
  for (uint64_t seed : {81ull, 82ull, 83ull}) {
    auto w = random_direction(g, seed, 4);
    const double via_el = first_variation_F(cache, fr, w);
    const double via_grad = discrete_directional(e, w);
    CHECK(std::abs(via_el - via_grad) < 1e-3 * std::max(1.0, std::abs(via_el)));
  }
}

TEST_CASE("descent: a few steps decrease the energy monotonically") {
  auto g = rotational_grid(std::sqrt(2.0), 1.0, 32);
  auto start = fourier_perturb(rotational_conformal(std::sqrt(2.0), 1.0, g), 5, 0.03, 2);
  DescentOptions opts;
  opts.max_iter = 8;
  opts.check_class_every = 100;  // skip class checks in the smoke test
  opts.gauge_trigger = 2e-4;     // n=32: the base field itself resolves to ~5e-5
  auto res = minimize(start, opts);
  REQUIRE(res.trajectory.size() >= 2);
  for (size_t k = 1; k < res.trajectory.size(); ++k)
    CHECK(res.trajectory[k].energy <= res.trajectory[k - 1].energy + 1e-12);
  CHECK_FALSE(res.class_flip);
  CHECK(check_immersion(res.immersion).ok);
}

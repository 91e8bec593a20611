#include "core/frame.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace fel;
using namespace fel::testing;

TEST_CASE("clifford: sample values and constant conformal factor") {
  auto g = square_grid(16);
  auto imm = clifford(g);
  CHECK(imm.dim() == 4);
  CHECK(imm.phi.at(0, 0) == doctest::Approx(1.0));
  CHECK(imm.phi.at(1, 0) == doctest::Approx(0.0));
  CHECK(imm.phi.at(2, 0) == doctest::Approx(1.0));
  CHECK(imm.phi.at(3, 0) == doctest::Approx(0.0));

  auto cache = build_geometry(imm);
  for (int p = 0; p < g->size(); ++p)
    CHECK(cache.lam.data[p] == doctest::Approx(std::log(kTwoPi)).epsilon(1e-12));
  CHECK(cache.conformality_residual < 1e-12);
}

TEST_CASE("clifford rejects non-square lattices") {
  auto g = make_grid(16, 16, ModuliPoint{0, 1.3});
  CHECK_THROWS_AS(clifford(g), Error);
}

TEST_CASE("clifford Willmore energy is 2 pi^2") {
  auto imm = clifford(square_grid(32));
  auto cache = build_geometry(imm);
  auto w = willmore_energy(cache);
  CHECK(w.W == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
  CHECK(w.quarter_II2 == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("rotational torus: conformal class from the meridian quadrature") {
  CHECK(rotational_conformal_tau2(std::sqrt(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rotational_conformal_tau2(2.0, 1.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));

  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, 64));
  auto cache = build_geometry(imm);
  CHECK(cache.conformality_residual < 1e-9);
}

TEST_CASE("rotational torus: conformality residual < 1e-10 at n = 128") {
  auto imm = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, 128));
  auto cache = build_geometry(imm);
  CHECK(cache.conformality_residual < 1e-10);
}

TEST_CASE("rotational torus: Willmore energy matches the closed form") {
  const double R = std::sqrt(2.0), r = 1.0;
  auto imm = rotational_conformal(R, r, rotational_grid(R, r, 64));
  auto w = willmore_energy(build_geometry(imm));
  CHECK(w.W == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
  CHECK(w.W == doctest::Approx(rotational_willmore_closed_form(R, r)).epsilon(1e-10));

  auto imm2 = rotational_conformal(2.0, 1.0, rotational_grid(2.0, 1.0, 64));
  auto w2 = willmore_energy(build_geometry(imm2));
  CHECK(w2.W == doctest::Approx(rotational_willmore_closed_form(2.0, 1.0)).epsilon(1e-10));
  CHECK(w2.W == doctest::Approx(4.0 * kPi * kPi / std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("rotational torus rejections") {
  CHECK_THROWS_AS(rotational_conformal(1.0, 1.0, square_grid(16)), Error);
  // square grid does not match the class of R=2, r=1
  CHECK_THROWS_WITH_AS(rotational_conformal(2.0, 1.0, square_grid(16)),
                       doctest::Contains("0.577"), Error);
}

TEST_CASE("figure-eight sweep passes the immersion floor at n = 64") {
  auto imm = twisted_figure_eight(square_grid(64), 0.35);
  auto chk = check_immersion(imm);
  CHECK(chk.ok);
}

TEST_CASE("figure-eight sweep has image self-intersections") {
  auto g = square_grid(64);
  auto imm = twisted_figure_eight(g, 0.35);
  // brute-force closest-pair over distant parameter pairs
  const double h = 1.0 / 64;
  double best = 1e30;
  for (int p = 0; p < g->size(); ++p) {
    const int ip = p % 64, jp = p / 64;
    for (int q = p + 1; q < g->size(); ++q) {
      const int iq = q % 64, jq = q / 64;
      double da = std::abs(ip - iq) / 64.0, db = std::abs(jp - jq) / 64.0;
      da = std::min(da, 1.0 - da);
      db = std::min(db, 1.0 - db);
      if (da * da + db * db < 0.05) continue;  // only distant parameter pairs
      const Vec d = imm.phi.vec_at(p) - imm.phi.vec_at(q);
      best = std::min(best, norm(d));
    }
  }
  CHECK(best < h);  // two far-apart grid points nearly coincide in the image
}

TEST_CASE("figure-eight rejects scales that break the immersion floor") {
  CHECK_THROWS_AS(twisted_figure_eight(square_grid(32), 3.0), Error);
}

TEST_CASE("fourier_perturb: determinism and identity at amplitude zero") {
  auto base = clifford(square_grid(32));
  auto a = fourier_perturb(base, 7, 0.0, 4);
  for (size_t k = 0; k < base.phi.data.size(); ++k) CHECK(a.phi.data[k] == base.phi.data[k]);

  auto b1 = fourier_perturb(base, 7, 0.05, 4);
  auto b2 = fourier_perturb(base, 7, 0.05, 4);
  for (size_t k = 0; k < b1.phi.data.size(); ++k) CHECK(b1.phi.data[k] == b2.phi.data[k]);

  auto c = fourier_perturb(base, 8, 0.05, 4);
  double diff = 0;
  for (size_t k = 0; k < b1.phi.data.size(); ++k) diff = std::max(diff, std::abs(b1.phi.data[k] - c.phi.data[k]));
  CHECK(diff > 1e-4);
}

TEST_CASE("fourier_perturb keeps the immersion floor at n = 64") {
  auto base = clifford(square_grid(64));
  auto p = fourier_perturb(base, 7, 0.05, 6);
  CHECK(check_immersion(p).ok);
}

TEST_CASE("transform: identity, equivariance of sampling, orthogonality check") {
  auto base = rotational_conformal(std::sqrt(2.0), 1.0, rotational_grid(std::sqrt(2.0), 1.0, 32));
  auto same = transform(base, 1.0, identity_rotation(3), Vec(0, 0, 0));
  for (size_t k = 0; k < base.phi.data.size(); ++k) CHECK(same.phi.data[k] == doctest::Approx(base.phi.data[k]));

  auto rot = random_rotation(3, 99);
  auto moved = transform(base, 2.5, rot, Vec(0.3, -1.0, 2.0));
  // affine maps commute with sampling: check one point by hand
  const int p = base.grid()->index(3, 5);
  const Vec x = base.phi.vec_at(p);
  Vec expect = Vec::zero(3);
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j) s += rot[static_cast<size_t>(i * 3 + j)] * x[j];
    expect[i] = 2.5 * s;
  }
  expect += Vec(0.3, -1.0, 2.0);
  for (int i = 0; i < 3; ++i) CHECK(moved.phi.vec_at(p)[i] == doctest::Approx(expect[i]).epsilon(1e-13));

  auto bad = identity_rotation(3);
  bad[1] = 0.5;
  CHECK_THROWS_AS(transform(base, 1.0, bad, Vec(0, 0, 0)), Error);
}

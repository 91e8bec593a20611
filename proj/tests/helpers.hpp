#pragma once

#include <functional>
#include <random>

#include "core/frame.hpp"
#include "core/immersion.hpp"

namespace fel::testing {

inline GridPtr square_grid(int n) { return make_grid(n, n, ModuliPoint{0, 1}); }

inline GridPtr rotational_grid(double R, double r, int n) {
  return make_grid(n, n, ModuliPoint{0, rotational_conformal_tau2(R, r)});
}

inline std::vector<double> identity_rotation(int m) {
  std::vector<double> rot(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) rot[static_cast<size_t>(i * m + i)] = 1.0;
  return rot;
}

// Random rotation via Gram-Schmidt of a random matrix, then determinant fix.
inline std::vector<double> random_rotation(int m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> cols(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(m)));
  for (auto& c : cols)
    for (auto& v : c) v = u(rng);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      double d = 0;
      for (int k = 0; k < m; ++k) d += cols[i][k] * cols[j][k];
      for (int k = 0; k < m; ++k) cols[i][k] -= d * cols[j][k];
    }
    double nn = 0;
    for (int k = 0; k < m; ++k) nn += cols[i][k] * cols[i][k];
    nn = std::sqrt(nn);
    for (int k = 0; k < m; ++k) cols[i][k] /= nn;
  }
  std::vector<double> rot(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rot[static_cast<size_t>(i * m + j)] = cols[j][i];
  // re-orthonormalize rows once more for 1e-12 tolerance
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < i; ++j) {
        double d = 0;
        for (int k = 0; k < m; ++k) d += rot[i * m + k] * rot[j * m + k];
        for (int k = 0; k < m; ++k) rot[i * m + k] -= d * rot[j * m + k];
      }
      double nn = 0;
      for (int k = 0; k < m; ++k) nn += rot[i * m + k] * rot[i * m + k];
      nn = std::sqrt(nn);
      for (int k = 0; k < m; ++k) rot[i * m + k] /= nn;
    }
  }
  // proper rotation: flip one row if the determinant came out negative
  double det = 0;
  if (m == 3) {
    det = rot[0] * (rot[4] * rot[8] - rot[5] * rot[7]) - rot[1] * (rot[3] * rot[8] - rot[5] * rot[6]) +
          rot[2] * (rot[3] * rot[7] - rot[4] * rot[6]);
  } else {
    // expansion along the first row (m = 4)
    auto minor3 = [&](int r0, int c0) {
      int rows[3], cols[3], ri = 0, ci = 0;
      for (int r = 0; r < 4; ++r)
        if (r != r0) rows[ri++] = r;
      for (int c = 0; c < 4; ++c)
        if (c != c0) cols[ci++] = c;
      return rot[rows[0] * 4 + cols[0]] *
                 (rot[rows[1] * 4 + cols[1]] * rot[rows[2] * 4 + cols[2]] -
                  rot[rows[1] * 4 + cols[2]] * rot[rows[2] * 4 + cols[1]]) -
             rot[rows[0] * 4 + cols[1]] *
                 (rot[rows[1] * 4 + cols[0]] * rot[rows[2] * 4 + cols[2]] -
                  rot[rows[1] * 4 + cols[2]] * rot[rows[2] * 4 + cols[0]]) +
             rot[rows[0] * 4 + cols[2]] *
                 (rot[rows[1] * 4 + cols[0]] * rot[rows[2] * 4 + cols[1]] -
                  rot[rows[1] * 4 + cols[1]] * rot[rows[2] * 4 + cols[0]]);
    };
    for (int c = 0; c < 4; ++c) det += ((c % 2 == 0) ? 1.0 : -1.0) * rot[c] * minor3(0, c);
  }
  if (det < 0)
    for (int k = 0; k < m; ++k) rot[k] = -rot[k];
  return rot;
}

// Richardson-extrapolated centered difference of a scalar function of t at 0.
inline double richardson_fd(const std::function<double(double)>& f, double h) {
  const double d1 = (f(h) - f(-h)) / (2 * h);
  const double d2 = (f(h / 2) - f(-h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace fel::testing

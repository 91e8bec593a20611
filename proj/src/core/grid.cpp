#include "grid.hpp"

#include <algorithm>
#include <sstream>

namespace fel {

bool ModuliPoint::in_strip(double eps) const {
  if (!(tau2 > 0)) return false;
  if (tau1 <= -0.5 - eps || tau1 > 0.5 + eps) return false;
  const double n2 = norm2();
  if (n2 < 1.0 - eps) return false;
  if (std::abs(n2 - 1.0) <= eps && tau1 < -eps) return false;
  return true;
}

std::string ModuliReduction::word() const {
  std::ostringstream os;
  if (flipped_orientation) os << "C ";
  for (size_t k = 0; k < moves.size(); ++k) {
    if (k) os << ' ';
    if (moves[k].kind == 'S')
      os << 'S';
    else
      os << "T^" << moves[k].power;
  }
  if (moves.empty() && !flipped_orientation) os << "id";
  return os.str();
}

ModuliReduction reduce_to_moduli(double tau1, double tau2) {
  require(std::isfinite(tau1) && std::isfinite(tau2), ErrorCode::invalid_argument,
          "reduce_to_moduli: non-finite lattice parameter");
  require(tau2 != 0.0, ErrorCode::degenerate_input, "reduce_to_moduli: degenerate lattice (tau2 = 0)");

  ModuliReduction red;
  if (tau2 < 0) {
    tau1 = -tau1;
    tau2 = -tau2;
    red.flipped_orientation = true;
  }

  const double eps = 1e-13;
  for (int iter = 0; iter < 256; ++iter) {
    // Translate tau1 into [-1/2, 1/2).
    const long k = static_cast<long>(std::floor(tau1 + 0.5));
    if (k != 0) {
      tau1 -= static_cast<double>(k);
      red.moves.push_back({'T', -k});
    }
    const double n2 = tau1 * tau1 + tau2 * tau2;
    if (n2 < 1.0 - eps) {
      tau1 = -tau1 / n2;
      tau2 = tau2 / n2;
      red.moves.push_back({'S', 0});
      continue;
    }
    break;
  }

  // Boundary ties of the half-open strip.
  if (std::abs(tau1 + 0.5) <= 1e-12) {
    tau1 = 0.5;
    red.moves.push_back({'T', 1});
  }
  const double n2 = tau1 * tau1 + tau2 * tau2;
  if (std::abs(n2 - 1.0) <= 1e-12 && tau1 < 0) {
    tau1 = -tau1 / n2;
    tau2 = tau2 / n2;
    red.moves.push_back({'S', 0});
  }

  red.tau = ModuliPoint{tau1, tau2};
  require(red.tau.in_strip(1e-9), ErrorCode::numeric_failure, "reduce_to_moduli: reduction failed to land in the strip");
  return red;
}

PeriodicGrid::PeriodicGrid(int n1, int n2, ModuliPoint tau) : n1_(n1), n2_(n2), tau_(tau) {
  require(n1 >= 8 && n2 >= 8, ErrorCode::invalid_argument, "grid: n1, n2 must be at least 8");
  require(n1 % 2 == 0 && n2 % 2 == 0, ErrorCode::invalid_argument, "grid: n1, n2 must be even");
  require(tau.tau2 > 0, ErrorCode::degenerate_input, "grid: tau2 must be positive");
}

GridPtr make_grid(int n1, int n2, ModuliPoint tau) { return std::make_shared<const PeriodicGrid>(n1, n2, tau); }

double max_abs(const ScalarField& f) {
  double m = 0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const VectorField& f) {
  double m = 0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const ScalarField& f) {
  double s = 0;
  for (double v : f.data) s += v * v;
  return std::sqrt(s * f.grid->jacobian());
}

double l2_norm(const VectorField& f) {
  double s = 0;
  for (double v : f.data) s += v * v;
  return std::sqrt(s * f.grid->jacobian());
}

bool all_finite(const ScalarField& f) {
  return std::all_of(f.data.begin(), f.data.end(), [](double v) { return std::isfinite(v); });
}

bool all_finite(const VectorField& f) {
  return std::all_of(f.data.begin(), f.data.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace fel

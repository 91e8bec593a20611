#pragma once

#include <memory>
#include <string>
#include <vector>

#include "common.hpp"

namespace fel {

// Point tau = (tau1, tau2) of the moduli strip M:
//   tau2 > 0, -1/2 < tau1 <= 1/2, |tau| >= 1, and tau1 >= 0 when |tau| = 1.
// theta = arccos(tau1) in (pi/3, 2pi/3].
struct ModuliPoint {
  double tau1 = 0.0;
  double tau2 = 1.0;

  double theta() const { return std::acos(tau1); }
  double norm2() const { return tau1 * tau1 + tau2 * tau2; }
  bool in_strip(double eps = 1e-12) const;
};

// One generator applied during reduction: "T^k" (tau1 -> tau1 + k) or "S" (tau -> -1/tau).
struct ModuliMove {
  char kind;  // 'T' or 'S'
  long power; // exponent for T, unused for S
};

struct ModuliReduction {
  ModuliPoint tau;
  std::vector<ModuliMove> moves;  // applied left-to-right to the oriented input
  bool flipped_orientation = false;
  std::string word() const;
};

// PSL(2,Z) reduction to the strip M. Requires tau2 != 0; inputs with tau2 < 0
// are orientation-flipped first. Boundary ties: tau1 = -1/2 maps to +1/2,
// |tau| = 1 with tau1 < 0 maps by inversion to tau1 > 0.
ModuliReduction reduce_to_moduli(double tau1, double tau2);

// Uniform periodic grid over the fundamental parallelogram spanned by (1,0)
// and (tau1,tau2). Samples live at lattice coordinates (i/n1, j/n2) with the
// half-open convention; flat coordinates are X = a + tau1*b, Y = tau2*b.
class PeriodicGrid {
 public:
  PeriodicGrid(int n1, int n2, ModuliPoint tau);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int size() const { return n1_ * n2_; }
  const ModuliPoint& tau() const { return tau_; }
  double cell_area() const { return tau_.tau2; }              // area of fundamental domain
  double jacobian() const { return tau_.tau2 / (n1_ * n2_); } // per-sample quadrature weight

  int index(int i, int j) const { return j * n1_ + i; }
  double a_of(int i) const { return static_cast<double>(i) / n1_; }
  double b_of(int j) const { return static_cast<double>(j) / n2_; }

  bool same_layout(const PeriodicGrid& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && tau_.tau1 == o.tau_.tau1 && tau_.tau2 == o.tau_.tau2;
  }

 private:
  int n1_;
  int n2_;
  ModuliPoint tau_;
};

using GridPtr = std::shared_ptr<const PeriodicGrid>;

GridPtr make_grid(int n1, int n2, ModuliPoint tau);

struct ScalarField {
  GridPtr grid;
  std::vector<double> data;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0) : grid(std::move(g)), data(grid->size(), fill) {}
  double& at(int i, int j) { return data[static_cast<size_t>(grid->index(i, j))]; }
  double at(int i, int j) const { return data[static_cast<size_t>(grid->index(i, j))]; }
  int size() const { return static_cast<int>(data.size()); }
};

// m-component field stored as m contiguous scalar planes (SoA).
struct VectorField {
  GridPtr grid;
  int dim = 3;
  std::vector<double> data;

  VectorField() = default;
  VectorField(GridPtr g, int m) : grid(std::move(g)), dim(m), data(static_cast<size_t>(grid->size()) * m, 0.0) {}

  double* plane(int c) { return data.data() + static_cast<size_t>(c) * grid->size(); }
  const double* plane(int c) const { return data.data() + static_cast<size_t>(c) * grid->size(); }

  double& at(int c, int idx) { return data[static_cast<size_t>(c) * grid->size() + idx]; }
  double at(int c, int idx) const { return data[static_cast<size_t>(c) * grid->size() + idx]; }

  Vec vec_at(int idx) const {
    Vec r = Vec::zero(dim);
    for (int c = 0; c < dim; ++c) r[c] = at(c, idx);
    return r;
  }
  void set_vec(int idx, const Vec& v) {
    for (int c = 0; c < dim; ++c) at(c, idx) = v[c];
  }
  ScalarField component(int c) const {
    ScalarField f(grid);
    const double* p = plane(c);
    std::copy(p, p + grid->size(), f.data.begin());
    return f;
  }
};

// Max-norm and discrete L2 norm (quadrature-weighted) helpers.
double max_abs(const ScalarField& f);
double max_abs(const VectorField& f);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

}  // namespace fel

#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "grid.hpp"

namespace fel {

// Trigonometric-interpolation calculus on a PeriodicGrid. Derivatives are
// taken either in lattice coordinates (a,b) on the unit square or in the flat
// coordinates (X,Y) = (a + tau1*b, tau2*b) of the fundamental parallelogram;
// the paper-facing operators (deriv_x, deriv_y, laplace, poisson) all act in
// flat coordinates. Nyquist modes are dropped from derivative symbols.
class Spectral {
 public:
  explicit Spectral(GridPtr grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const GridPtr& grid() const { return grid_; }

  ScalarField deriv_a(const ScalarField& f) const;
  ScalarField deriv_b(const ScalarField& f) const;
  ScalarField deriv_x(const ScalarField& f) const;
  ScalarField deriv_y(const ScalarField& f) const;
  VectorField deriv_x(const VectorField& f) const;
  VectorField deriv_y(const VectorField& f) const;

  // grad_perp = (-d/dY, d/dX)
  void grad(const ScalarField& f, ScalarField& fx, ScalarField& fy) const;
  ScalarField divergence(const ScalarField& wx, const ScalarField& wy) const;

  void second_derivs(const ScalarField& f, ScalarField& fxx, ScalarField& fxy, ScalarField& fyy) const;
  void second_derivs(const VectorField& f, VectorField& fxx, VectorField& fxy, VectorField& fyy) const;

  ScalarField laplace(const ScalarField& f) const;

  struct PoissonResult {
    ScalarField phi;
    double removed_mean = 0.0;  // grid mean of the rhs, subtracted before inversion
    bool mean_flagged = false;  // |removed_mean| exceeded the tolerance
    double residual = 0.0;      // max |laplace(phi) - (rhs - mean)| over dropped-mode content
  };
  // Solves laplace(phi) = rhs - mean(rhs) with zero-mean phi.
  PoissonResult poisson(const ScalarField& rhs, double mean_tol = 1e-8) const;

  // Adjoints w.r.t. the plain grid dot product (for the discrete energy gradient):
  // deriv_* are antisymmetric, poisson/laplace symmetric.
  ScalarField deriv_x_adjoint(const ScalarField& f) const;
  ScalarField deriv_y_adjoint(const ScalarField& f) const;
  ScalarField poisson_adjoint(const ScalarField& f) const;

  // Complex spectrum access (row-major, l*n1+k layout matching the grid).
  std::vector<std::complex<double>> forward(const ScalarField& f) const;
  ScalarField inverse(const std::vector<std::complex<double>>& spec) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  GridPtr grid_;

  ScalarField apply_symbol(const ScalarField& f, const std::function<std::complex<double>(double, double)>& sym) const;
};

double integrate(const ScalarField& f);  // trapezoidal on the periodic grid, cell-jacobian scaled
double grid_mean(const ScalarField& f);  // plain average of samples

// Band-limited evaluation of a field at arbitrary lattice coordinates:
// zero-padded spectrum to an oversampled grid plus local 6x6 Lagrange stencil.
class Interpolator {
 public:
  Interpolator(const Spectral& sp, const ScalarField& f, int oversample = 8);
  Interpolator(const Spectral& sp, const VectorField& f, int oversample = 8);

  double eval(double a, double b) const;          // scalar fields
  Vec eval_vec(double a, double b) const;         // vector fields

 private:
  int n1f_ = 0, n2f_ = 0, dim_ = 1;
  std::vector<double> fine_;  // dim planes on the oversampled grid
  double value(int plane, double a, double b) const;
};

// Periodic 1D spectral derivative of m-component samples (curves).
void curve_derivative(const std::vector<Vec>& samples, std::vector<Vec>& out);

}  // namespace fel

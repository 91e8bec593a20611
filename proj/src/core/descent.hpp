#pragma once

#include "gauge.hpp"
#include "homotopy.hpp"
#include "variation.hpp"

namespace fel {

struct DescentOptions {
  int max_iter = 500;
  double grad_tol = 1e-7;        // stop when the preconditioned step norm falls below
  int check_class_every = 25;
  uint64_t seed = 0;             // recorded in reports only
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double initial_trust = 0.05;   // first-step cap on the coefficient displacement
  double gauge_trigger = 1e-4;   // restore conformal gauge above this residual
  int band_limit = 0;            // descent modes per axis; 0 means n/4
  bool precondition = true;
};

struct DescentStep {
  int step = 0;
  double energy = 0.0;   // discrete objective F_T + quarter_II2
  double F = 0.0;        // direct frame energy of the Coulomb frame
  double F_T = 0.0;
  double W = 0.0;
  double el_residual = 0.0;
  double gauge_residual = 0.0;
  double grad_norm = 0.0;
  double tau2 = 0.0;
  std::string class_label;
};

struct DescentResult {
  Immersion immersion;                 // final state (conformal gauge)
  std::vector<DescentStep> trajectory; // entry 0 is the prepared start
  bool converged = false;
  bool class_flip = false;             // hard failure: label changed along the way
  std::string stop_reason;
};

// Backtracking line-search descent on the band-limited Fourier coefficients of
// Phi using the exact discrete gradient; each accepted step is followed by
// conformal gauge restoration (with lattice update) and re-evaluation.
DescentResult minimize(const Immersion& start, const DescentOptions& opts);

}  // namespace fel

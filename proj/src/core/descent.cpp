#include "descent.hpp"

namespace fel {

namespace {

// Preconditioned, band-limited descent direction: the gradient is damped in
// Fourier space by 1/(1 + |kappa/2pi|^2)^2 to tame the fourth-order stiffness,
// and truncated to the descent band.
VectorField descent_direction(const Spectral& sp, const VectorField& grad, int band, bool precondition) {
  const auto& g = *grad.grid;
  const int n1 = g.n1(), n2 = g.n2();
  const double t1 = g.tau().tau1, t2 = g.tau().tau2;
  VectorField out(grad.grid, grad.dim);
  for (int c = 0; c < grad.dim; ++c) {
    auto spec = sp.forward(grad.component(c));
    for (int j = 0; j < n2; ++j) {
      double l = (j <= n2 / 2) ? j : j - n2;
      for (int i = 0; i < n1; ++i) {
        double k = (i <= n1 / 2) ? i : i - n1;
        auto& v = spec[static_cast<size_t>(j) * n1 + i];
        if (std::abs(k) > band || std::abs(l) > band) {
          v = 0.0;
          continue;
        }
        if (precondition) {
          const double kx = k;
          const double ky = (l - t1 * k) / t2;
          const double m2 = kx * kx + ky * ky;  // |kappa|^2 / (2 pi)^2
          v /= sqr(1.0 + m2);
        }
      }
    }
    ScalarField plane = sp.inverse(spec);
    std::copy(plane.data.begin(), plane.data.end(), out.plane(c));
  }
  return out;
}

double max_abs_vec(const VectorField& f) {
  double m = 0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

DescentStep evaluate_state(const Immersion& imm, int step_index, double energy, double grad_norm,
                           bool with_class) {
  DescentStep s;
  s.step = step_index;
  s.energy = energy;
  s.grad_norm = grad_norm;
  auto cache = build_geometry(imm);
  s.gauge_residual = cache.conformality_residual;
  auto frame = coulomb_project(cache, coordinate_frame(cache)).frame;
  auto breakdown = frame_energy(cache, frame);
  s.F = breakdown.F;
  s.F_T = breakdown.F_T;
  s.W = breakdown.W;
  s.el_residual = el_residual_norm(cache, frame, 1e-2);
  s.tau2 = imm.grid()->tau().tau2;
  if (with_class) s.class_label = classify(imm, cache).label;
  return s;
}

}  // namespace

DescentResult minimize(const Immersion& start, const DescentOptions& opts) {
  require(start.dim() == 3, ErrorCode::invalid_argument, "minimize: descent is implemented for m = 3");
  require(check_immersion(start).ok, ErrorCode::degenerate_input, "minimize: start violates the immersion floor");

  DescentResult res;

  // prepare: conformal gauge from the beginning (best effort; the achievable
  // residual is limited by how well the grid resolves the state, and the loop
  // tracks that floor)
  auto prep = restore_conformal_gauge(start, opts.gauge_trigger * 1e-2, 0.5, 8, /*best_effort=*/true);
  Immersion cur = prep.immersion;
  // the loop keeps the state inside a gauge band around the best residual the
  // grid has been able to reach for this descent
  double gauge_floor = std::max(prep.residual_after, opts.gauge_trigger * 1e-2);

  auto e0 = discrete_energy(cur, /*with_gradient=*/true);
  DescentStep s0 = evaluate_state(cur, 0, e0.value, l2_norm(e0.grad), /*with_class=*/true);
  const std::string class0 = s0.class_label;
  res.trajectory.push_back(s0);

  double trust = opts.initial_trust;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Spectral sp(cur.grid());
    const int band = (opts.band_limit > 0) ? opts.band_limit : cur.grid()->n1() / 4;
    VectorField dir = descent_direction(sp, e0.grad, band, opts.precondition);
    const double slope = discrete_directional(e0, dir);  // positive for the gradient-like direction
    const double dmax = max_abs_vec(dir);
    if (dmax == 0 || slope <= 0) {
      res.stop_reason = "stationary";
      res.converged = true;
      break;
    }

    double step = trust / dmax;
    bool accepted = false;
    Immersion candidate;
    DiscreteEnergy ec;
    for (int bt = 0; bt < opts.max_backtracks; ++bt, step *= opts.backtrack) {
      candidate = cur;
      for (size_t k = 0; k < candidate.phi.data.size(); ++k) candidate.phi.data[k] -= step * dir.data[k];
      if (!check_immersion(candidate).ok) continue;
      ec = discrete_energy(candidate, /*with_gradient=*/false);
      const double armijo = e0.value - opts.armijo_c * step * slope;
      if (ec.value > armijo) continue;
      const double gauge_band = std::max(opts.gauge_trigger, 1.5 * gauge_floor);
      if (ec.conformality_residual > gauge_band) {
        GaugeResult gr;
        try {
          gr = restore_conformal_gauge(candidate, opts.gauge_trigger * 1e-2, 0.5, 3, /*best_effort=*/true);
        } catch (const Error&) {
          continue;  // hard cap exceeded: shrink the step
        }
        if (gr.residual_after > gauge_band) continue;  // cannot return to the band: smaller step
        gauge_floor = std::min(gauge_floor, gr.residual_after);
        candidate = gr.immersion;
        ec = discrete_energy(candidate, /*with_gradient=*/false);
        if (ec.value > armijo) continue;  // restoration ate the decrease
      }
      accepted = true;
      break;
    }
    if (!accepted) {
      res.stop_reason = "line_search_exhausted";
      break;
    }

    cur = candidate;
    e0 = discrete_energy(cur, /*with_gradient=*/true);
    trust = std::min(std::max(step * dmax * 2.0, 1e-8), opts.initial_trust);

    const bool check_class = (iter % opts.check_class_every == 0) || iter == opts.max_iter;
    DescentStep st = evaluate_state(cur, iter, e0.value, l2_norm(e0.grad), check_class);
    if (check_class && st.class_label != class0) {
      res.class_flip = true;
      res.stop_reason = "class_flip";
      res.trajectory.push_back(st);
      break;
    }
    res.trajectory.push_back(st);

    if (l2_norm(e0.grad) < opts.grad_tol) {
      res.stop_reason = "grad_tol";
      res.converged = true;
      break;
    }
  }
  if (res.stop_reason.empty()) res.stop_reason = "max_iter";

  // final state with a class check
  if (!res.class_flip) {
    DescentStep fin = evaluate_state(cur, static_cast<int>(res.trajectory.size()), e0.value,
                                     l2_norm(e0.grad), /*with_class=*/true);
    if (fin.class_label != class0) {
      res.class_flip = true;
      res.stop_reason = "class_flip";
    }
  }
  res.immersion = cur;
  return res;
}

}  // namespace fel

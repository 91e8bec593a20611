#include "lower_bound.hpp"

namespace fel {

double f_moduli(double tau2, double theta) {
  require(tau2 > 0, ErrorCode::invalid_argument, "f_moduli: tau2 must be positive");
  require(theta > kPi / 3 - 1e-9 && theta < 2 * kPi / 3 + 1e-9, ErrorCode::invalid_argument,
          "f_moduli: theta outside (pi/3, 2pi/3)");
  const double s2 = sqr(std::sin(theta));
  const double c4 = sqr(sqr(std::cos(theta)));
  return (tau2 + 1.0 / tau2) * s2 / (s2 + c4);
}

OmegaMembership in_omega_LYMR(const ModuliPoint& tau) {
  const double t1 = std::abs(tau.tau1);
  const double rho = std::sqrt(sqr(t1 - 0.5) + sqr(tau.tau2 - 1.0));
  OmegaMembership m;
  m.boundary_distance = 0.5 - rho;
  m.member = m.boundary_distance >= 0.0;
  return m;
}

namespace {

// A = (d_{e1} e1, e2) and B = (d_{e2} e2, e1) for the coordinate frame in
// conformal gauge.
void frame_curvature_terms(const GeometryCache& cache, const Frame& frame, ScalarField& A, ScalarField& B) {
  Spectral sp(cache.grid);
  VectorField e1x = sp.deriv_x(frame.e1);
  VectorField e2y = sp.deriv_y(frame.e2);
  A = ScalarField(cache.grid);
  B = ScalarField(cache.grid);
  for (int p = 0; p < cache.grid->size(); ++p) {
    const double el = std::exp(-cache.lam.data[p]);
    A.data[p] = el * dot(e1x.vec_at(p), frame.e2.vec_at(p));
    B.data[p] = el * dot(e2y.vec_at(p), frame.e1.vec_at(p));
  }
}

}  // namespace

double bound_lhs_LB0(const GeometryCache& cache, const Frame& frame, const ModuliPoint& tau,
                     double conformality_cap) {
  require(cache.conformality_residual <= conformality_cap, ErrorCode::gauge_failure,
          "bound_lhs_LB0: non-conformal input");
  const double theta = tau.theta();
  const double s2 = sqr(std::sin(theta));
  const double c2 = sqr(std::cos(theta));
  const double w11 = 1.0 + c2 * c2 / s2;
  const double w22 = s2;
  const double w12 = 4.0 * c2;
  const double wA = 1.0 + c2 / s2;

  ScalarField A, B;
  frame_curvature_terms(cache, frame, A, B);

  ScalarField dens(cache.grid);
  for (int p = 0; p < dens.size(); ++p) {
    const double e2l = std::exp(2.0 * cache.lam.data[p]);
    const double e4l = e2l * e2l;
    const double ii = w11 * dot(cache.II11.vec_at(p), cache.II11.vec_at(p)) +
                      w22 * dot(cache.II22.vec_at(p), cache.II22.vec_at(p)) +
                      w12 * dot(cache.II12.vec_at(p), cache.II12.vec_at(p));
    dens.data[p] = (ii / e4l + wA * sqr(A.data[p]) + sqr(B.data[p])) * e2l;  // dvol = e^{2 lam} dX dY
  }
  return integrate(dens);
}

IntermediateBounds intermediate_bounds(const GeometryCache& cache, const Frame& frame, const ModuliPoint& tau,
                                       double conformality_cap) {
  require(cache.conformality_residual <= conformality_cap, ErrorCode::gauge_failure,
          "intermediate_bounds: non-conformal input");
  Spectral sp(cache.grid);
  const double theta = tau.theta();
  const double ct = std::cos(theta), st = std::sin(theta);

  // e2theta = cos(t) e1 + sin(t) e2 and its derivative along itself
  VectorField e2t(cache.grid, cache.dim);
  for (int p = 0; p < cache.grid->size(); ++p)
    e2t.set_vec(p, ct * frame.e1.vec_at(p) + st * frame.e2.vec_at(p));
  VectorField dx = sp.deriv_x(e2t), dy = sp.deriv_y(e2t);
  VectorField e1x = sp.deriv_x(frame.e1);

  ScalarField d1(cache.grid), d2(cache.grid);
  for (int p = 0; p < cache.grid->size(); ++p) {
    const double el = std::exp(-cache.lam.data[p]);
    const double e2l = std::exp(2.0 * cache.lam.data[p]);
    // d_{e1} e1 = e^{-lam} d_X e1
    Vec de1 = e1x.vec_at(p);
    de1 *= el;
    d1.data[p] = dot(de1, de1) * e2l;
    // d_{e2t} e2t = e^{-lam} (cos t d_X + sin t d_Y) e2t
    Vec de2 = ct * dx.vec_at(p) + st * dy.vec_at(p);
    de2 *= el;
    d2.data[p] = dot(de2, de2) * e2l;
  }
  IntermediateBounds b;
  b.e1_curvature_integral = integrate(d1);
  b.e2theta_integral = integrate(d2) / (st * st);
  return b;
}

BoundReport verify_theorem_LB(const Immersion& imm, const GeometryCache& cache, const Frame& frame,
                              int curve_offsets) {
  BoundReport rep;
  auto red = reduce_to_moduli(cache.grid->tau().tau1, cache.grid->tau().tau2);
  rep.tau1 = red.tau.tau1;
  rep.tau2 = red.tau.tau2;
  rep.theta = red.tau.theta();

  auto breakdown = frame_energy(cache, frame);
  rep.F = breakdown.F;
  rep.F_T = breakdown.F_T;
  rep.W = breakdown.W;

  // accept whatever residual the caller's gauge restoration achieved; it is
  // part of the report rather than a rejection
  const double cap = std::max(kConformalityThreshold, cache.conformality_residual * 1.01);
  rep.lhs_LB0 = bound_lhs_LB0(cache, frame, red.tau, cap);
  rep.rhs_LB0 = 4.0 * kPi * kPi * (rep.tau2 + 1.0 / rep.tau2);
  rep.f_value = f_moduli(rep.tau2, rep.theta);

  const auto om = in_omega_LYMR(red.tau);
  rep.in_omega = om.member;
  rep.omega_distance = om.boundary_distance;
  rep.branch = om.member ? "willmore_bound_inside_omega" : "moduli_function_bound";

  rep.fenchel_min = std::numeric_limits<double>::infinity();
  const int n1 = cache.grid->n1(), n2 = cache.grid->n2();
  for (int k = 0; k < curve_offsets; ++k) {
    rep.fenchel_min = std::min(
        rep.fenchel_min, fenchel_integral(lattice_curve(imm, cache, CurveFamily::x_generator, (k * n2) / curve_offsets)));
    rep.fenchel_min = std::min(
        rep.fenchel_min, fenchel_integral(lattice_curve(imm, cache, CurveFamily::tau_generator, (k * n1) / curve_offsets)));
  }

  rep.lb0_ok = rep.lhs_LB0 >= rep.rhs_LB0 * (1.0 - kBoundVerdictSlack);
  rep.fenchel_ok = rep.fenchel_min >= 2.0 * kPi - kBoundVerdictSlack;
  rep.verdict = rep.F >= 2.0 * kPi * kPi * (1.0 - kBoundVerdictSlack);
  return rep;
}

}  // namespace fel

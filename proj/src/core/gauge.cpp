#include "gauge.hpp"

#include <fftw3.h>

#include <complex>

namespace fel {

namespace {

using cd = std::complex<double>;

// 2D FFT for complex periodic fields on the grid layout (j*n1 + i).
struct ComplexFFT {
  int n1, n2;
  fftw_plan fwd, bwd;
  explicit ComplexFFT(const PeriodicGrid& g) : n1(g.n1()), n2(g.n2()) {
    fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n1) * n2);
    fwd = fftw_plan_dft_2d(n2, n1, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_2d(n2, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
  }
  ~ComplexFFT() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  void forward(std::vector<cd>& v) const {
    fftw_execute_dft(fwd, reinterpret_cast<fftw_complex*>(v.data()), reinterpret_cast<fftw_complex*>(v.data()));
  }
  void backward(std::vector<cd>& v) const {
    fftw_execute_dft(bwd, reinterpret_cast<fftw_complex*>(v.data()), reinterpret_cast<fftw_complex*>(v.data()));
    const double s = 1.0 / (static_cast<double>(n1) * n2);
    for (auto& x : v) x *= s;
  }
};

inline double wavenum(int i, int n) {
  if (2 * i == n) return 0.0;
  return (i <= n / 2) ? static_cast<double>(i) : static_cast<double>(i - n);
}

// One linear Beltrami solve on the current chart: returns B (the affine
// dbar-part) and the periodic potential h with dbar(z + B zbar + h) =
// mu dz(z + B zbar + h).
void solve_beltrami(const PeriodicGrid& g, const std::vector<cd>& mu, cd& B, std::vector<cd>& h) {
  const int n1 = g.n1(), n2 = g.n2();
  const int n = n1 * n2;
  const double t1 = g.tau().tau1, t2 = g.tau().tau2;
  ComplexFFT fft(g);

  // symbols of d_z and d_zbar on the sheared torus
  std::vector<cd> sym_z(static_cast<size_t>(n)), sym_zb(static_cast<size_t>(n));
  for (int j = 0; j < n2; ++j) {
    const double l = wavenum(j, n2);
    for (int i = 0; i < n1; ++i) {
      const double k = wavenum(i, n1);
      const double kx = kTwoPi * k;
      const double ky = kTwoPi * (l - t1 * k) / t2;
      // d_z = (d_X - i d_Y)/2, d_zbar = (d_X + i d_Y)/2 with d_X -> i kx, d_Y -> i ky
      sym_z[static_cast<size_t>(j) * n1 + i] = 0.5 * (cd(0.0, kx) - cd(0.0, 1.0) * cd(0.0, ky));
      sym_zb[static_cast<size_t>(j) * n1 + i] = 0.5 * (cd(0.0, kx) + cd(0.0, 1.0) * cd(0.0, ky));
    }
  }

  // u = dbar w - (periodic part); iterate u_{k+1} = mu (1 + S u_k), S = dz dzbar^{-1}
  std::vector<cd> u(static_cast<size_t>(n), cd(0, 0)), su(static_cast<size_t>(n));
  B = cd(0, 0);
  for (int it = 0; it < 400; ++it) {
    // su = S (u - mean(u)) in Fourier space
    su = u;
    fft.forward(su);
    for (int p = 0; p < n; ++p) {
      if (std::abs(sym_zb[static_cast<size_t>(p)]) < 1e-14) {
        su[static_cast<size_t>(p)] = 0;
      } else {
        su[static_cast<size_t>(p)] *= sym_z[static_cast<size_t>(p)] / sym_zb[static_cast<size_t>(p)];
      }
    }
    fft.backward(su);
    double delta = 0;
    cd mean(0, 0);
    for (int p = 0; p < n; ++p) {
      const cd next = mu[static_cast<size_t>(p)] * (cd(1, 0) + su[static_cast<size_t>(p)]);
      delta = std::max(delta, std::abs(next - u[static_cast<size_t>(p)]));
      u[static_cast<size_t>(p)] = next;
      mean += next;
    }
    mean /= static_cast<double>(n);
    B = mean;
    if (delta < 1e-15) break;
  }

  // h = dzbar^{-1} (u - B), zero mean
  h.assign(static_cast<size_t>(n), cd(0, 0));
  for (int p = 0; p < n; ++p) h[static_cast<size_t>(p)] = u[static_cast<size_t>(p)] - B;
  fft.forward(h);
  for (int p = 0; p < n; ++p) {
    if (std::abs(sym_zb[static_cast<size_t>(p)]) < 1e-14)
      h[static_cast<size_t>(p)] = 0;
    else
      h[static_cast<size_t>(p)] /= sym_zb[static_cast<size_t>(p)];
  }
  fft.backward(h);
}

}  // namespace

GaugeResult restore_conformal_gauge(const Immersion& imm, double target, double hard_cap, int max_outer,
                                    bool best_effort) {
  GaugeResult res;
  res.immersion = imm;

  {
    auto cache0 = build_geometry(imm);
    res.residual_before = cache0.conformality_residual;
    res.residual_after = cache0.conformality_residual;
    res.tau = imm.grid()->tau();
    if (cache0.conformality_residual <= target) return res;  // identity
    require(cache0.conformality_residual <= hard_cap, ErrorCode::gauge_failure,
            "restore_conformal_gauge: conformality residual above the hard cap");
  }

  Immersion cur = imm;
  for (int outer = 0; outer < max_outer; ++outer) {
    const GridPtr g = cur.grid();
    const int n1 = g->n1(), n2 = g->n2(), n = g->size();
    Spectral sp(g);
    auto cache = build_geometry(cur);
    if (cache.conformality_residual <= target) break;
    res.outer_iterations = outer + 1;

    // Beltrami coefficient of the pullback metric in the current flat chart
    std::vector<cd> mu(static_cast<size_t>(n));
    double mu_max = 0;
    for (int p = 0; p < n; ++p) {
      const double E = cache.g11.data[p], F = cache.g12.data[p], G = cache.g22.data[p];
      const double denom = E + G + 2.0 * cache.sqrt_g.data[p];
      mu[static_cast<size_t>(p)] = cd(E - G, 2.0 * F) / denom;
      mu_max = std::max(mu_max, std::abs(mu[static_cast<size_t>(p)]));
    }
    require(mu_max < 0.95, ErrorCode::gauge_failure, "restore_conformal_gauge: dilatation too large");

    cd B;
    std::vector<cd> h;
    solve_beltrami(*g, mu, B, h);

    // New periods of w(z) = z + B zbar + h: omega1 over the (1,0) generator,
    // omega2 over tau.
    const cd tau_old(g->tau().tau1, g->tau().tau2);
    cd omega1 = cd(1, 0) + B;
    cd omega2 = tau_old + B * std::conj(tau_old);

    // reduce the new class to the strip, replaying the moves on the periods
    cd t = omega2 / omega1;
    auto red = reduce_to_moduli(t.real(), t.imag());
    if (red.flipped_orientation) fail(ErrorCode::gauge_failure, "restore_conformal_gauge: orientation flip");
    for (const auto& mv : red.moves) {
      if (mv.kind == 'T') {
        omega2 += static_cast<double>(mv.power) * omega1;
      } else {
        const cd o1 = omega1;
        omega1 = omega2;
        omega2 = -o1;
      }
    }
    const ModuliPoint new_tau = red.tau;

    // resample Phi at the preimages of the new grid
    auto new_grid = make_grid(n1, n2, new_tau);
    Immersion next;
    next.phi = VectorField(new_grid, cur.dim());
    next.label = cur.label;

    // 16x oversampling: the conformality residual of the resampled field is
    // limited by the interpolation error through one spectral derivative
    Interpolator phi_itp(sp, cur.phi, 16);
    // h as two real fields for interpolation
    ScalarField hr(g), hi(g);
    for (int p = 0; p < n; ++p) {
      hr.data[p] = h[static_cast<size_t>(p)].real();
      hi.data[p] = h[static_cast<size_t>(p)].imag();
    }
    Interpolator hr_itp(sp, hr, 16), hi_itp(sp, hi, 16);

    const double t1o = g->tau().tau1, t2o = g->tau().tau2;
    const double inv_den = 1.0 / (1.0 - std::norm(B));
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const double ap = new_grid->a_of(i), bp = new_grid->b_of(j);
        const cd w = ap * omega1 + bp * omega2;
        // invert w = z + B zbar + h(z) by fixed point on the affine part
        cd z = (w - B * std::conj(w)) * inv_den;
        for (int it = 0; it < 60; ++it) {
          // lattice coordinates of z in the old chart
          const double Y = z.imag() / t2o;
          const double X = z.real() - t1o * Y;
          const cd hz(hr_itp.eval(X, Y), hi_itp.eval(X, Y));
          const cd rhsv = w - hz;
          const cd znew = (rhsv - B * std::conj(rhsv)) * inv_den;
          const double step = std::abs(znew - z);
          z = znew;
          if (step < 1e-14) break;
        }
        const double Y = z.imag() / t2o;
        const double X = z.real() - t1o * Y;
        next.phi.set_vec(new_grid->index(i, j), phi_itp.eval_vec(X, Y));
      }
    }

    auto c2 = build_geometry(next);
    if (c2.conformality_residual >= res.residual_after / 3.0 && res.changed) {
      break;  // resolution floor reached; keep the previous state
    }
    cur = next;
    res.residual_after = c2.conformality_residual;
    res.tau = new_tau;
    res.changed = true;
    if (c2.conformality_residual <= target) break;
  }

  if (!best_effort) {
    require(res.residual_after <= target, ErrorCode::gauge_failure,
            "restore_conformal_gauge: stalled at residual " + std::to_string(res.residual_after));
  }
  res.immersion = cur;
  return res;
}

}  // namespace fel

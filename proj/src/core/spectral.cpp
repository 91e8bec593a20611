#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>

namespace fel {

namespace {

// Signed wavenumber with the Nyquist mode zeroed (derivative convention).
inline double wavenum(int i, int n) {
  if (2 * i == n) return 0.0;
  return (i <= n / 2) ? static_cast<double>(i) : static_cast<double>(i - n);
}

}  // namespace

struct Spectral::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  int n1 = 0, n2 = 0;

  explicit Impl(int n1_, int n2_) : n1(n1_), n2(n2_) {
    fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n1) * n2);
    // fftw uses row-major with the LAST dimension contiguous; our layout is
    // index = j*n1 + i, so the transform dimensions are (n2, n1).
    fwd = fftw_plan_dft_2d(n2, n1, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_2d(n2, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
  }
  ~Impl() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

Spectral::Spectral(GridPtr grid) : grid_(std::move(grid)) {
  impl_ = std::make_unique<Impl>(grid_->n1(), grid_->n2());
}

Spectral::~Spectral() = default;

std::vector<std::complex<double>> Spectral::forward(const ScalarField& f) const {
  const int n = grid_->size();
  std::vector<std::complex<double>> spec(static_cast<size_t>(n));
  for (int p = 0; p < n; ++p) spec[p] = f.data[p];
  fftw_execute_dft(impl_->fwd, reinterpret_cast<fftw_complex*>(spec.data()),
                   reinterpret_cast<fftw_complex*>(spec.data()));
  return spec;
}

ScalarField Spectral::inverse(const std::vector<std::complex<double>>& spec) const {
  const int n = grid_->size();
  std::vector<std::complex<double>> buf = spec;
  fftw_execute_dft(impl_->bwd, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data()));
  ScalarField out(grid_);
  const double scale = 1.0 / n;
  for (int p = 0; p < n; ++p) out.data[p] = buf[p].real() * scale;
  return out;
}

ScalarField Spectral::apply_symbol(const ScalarField& f,
                                   const std::function<std::complex<double>(double, double)>& sym) const {
  const int n1 = grid_->n1(), n2 = grid_->n2();
  auto spec = forward(f);
  for (int j = 0; j < n2; ++j) {
    const double l = wavenum(j, n2);
    for (int i = 0; i < n1; ++i) {
      const double k = wavenum(i, n1);
      spec[static_cast<size_t>(j) * n1 + i] *= sym(k, l);
    }
  }
  return inverse(spec);
}

ScalarField Spectral::deriv_a(const ScalarField& f) const {
  return apply_symbol(f, [](double k, double) { return std::complex<double>(0.0, kTwoPi * k); });
}

ScalarField Spectral::deriv_b(const ScalarField& f) const {
  return apply_symbol(f, [](double, double l) { return std::complex<double>(0.0, kTwoPi * l); });
}

ScalarField Spectral::deriv_x(const ScalarField& f) const { return deriv_a(f); }

ScalarField Spectral::deriv_y(const ScalarField& f) const {
  const double t1 = grid_->tau().tau1, t2 = grid_->tau().tau2;
  return apply_symbol(f, [t1, t2](double k, double l) { return std::complex<double>(0.0, kTwoPi * (l - t1 * k) / t2); });
}

VectorField Spectral::deriv_x(const VectorField& f) const {
  VectorField out(f.grid, f.dim);
  for (int c = 0; c < f.dim; ++c) {
    ScalarField d = deriv_x(f.component(c));
    std::copy(d.data.begin(), d.data.end(), out.plane(c));
  }
  return out;
}

VectorField Spectral::deriv_y(const VectorField& f) const {
  VectorField out(f.grid, f.dim);
  for (int c = 0; c < f.dim; ++c) {
    ScalarField d = deriv_y(f.component(c));
    std::copy(d.data.begin(), d.data.end(), out.plane(c));
  }
  return out;
}

void Spectral::grad(const ScalarField& f, ScalarField& fx, ScalarField& fy) const {
  fx = deriv_x(f);
  fy = deriv_y(f);
}

ScalarField Spectral::divergence(const ScalarField& wx, const ScalarField& wy) const {
  ScalarField d = deriv_x(wx);
  ScalarField e = deriv_y(wy);
  for (int p = 0; p < d.size(); ++p) d.data[p] += e.data[p];
  return d;
}

void Spectral::second_derivs(const ScalarField& f, ScalarField& fxx, ScalarField& fxy, ScalarField& fyy) const {
  const double t1 = grid_->tau().tau1, t2 = grid_->tau().tau2;
  auto kx = [](double k, double) { return kTwoPi * k; };
  auto ky = [t1, t2](double k, double l) { return kTwoPi * (l - t1 * k) / t2; };
  fxx = apply_symbol(f, [kx](double k, double l) { return std::complex<double>(-kx(k, l) * kx(k, l), 0.0); });
  fxy = apply_symbol(f, [kx, ky](double k, double l) { return std::complex<double>(-kx(k, l) * ky(k, l), 0.0); });
  fyy = apply_symbol(f, [ky](double k, double l) { return std::complex<double>(-ky(k, l) * ky(k, l), 0.0); });
}

void Spectral::second_derivs(const VectorField& f, VectorField& fxx, VectorField& fxy, VectorField& fyy) const {
  fxx = VectorField(f.grid, f.dim);
  fxy = VectorField(f.grid, f.dim);
  fyy = VectorField(f.grid, f.dim);
  for (int c = 0; c < f.dim; ++c) {
    ScalarField a, b, d;
    second_derivs(f.component(c), a, b, d);
    std::copy(a.data.begin(), a.data.end(), fxx.plane(c));
    std::copy(b.data.begin(), b.data.end(), fxy.plane(c));
    std::copy(d.data.begin(), d.data.end(), fyy.plane(c));
  }
}

ScalarField Spectral::laplace(const ScalarField& f) const {
  const double t1 = grid_->tau().tau1, t2 = grid_->tau().tau2;
  return apply_symbol(f, [t1, t2](double k, double l) {
    const double kx = kTwoPi * k;
    const double ky = kTwoPi * (l - t1 * k) / t2;
    return std::complex<double>(-(kx * kx + ky * ky), 0.0);
  });
}

Spectral::PoissonResult Spectral::poisson(const ScalarField& rhs, double mean_tol) const {
  PoissonResult res;
  const int n1 = grid_->n1(), n2 = grid_->n2();
  const double t1 = grid_->tau().tau1, t2 = grid_->tau().tau2;

  res.removed_mean = grid_mean(rhs);
  res.mean_flagged = std::abs(res.removed_mean) > mean_tol * std::max(1.0, max_abs(rhs));

  auto spec = forward(rhs);
  double dropped = 0.0;
  for (int j = 0; j < n2; ++j) {
    const double l = wavenum(j, n2);
    for (int i = 0; i < n1; ++i) {
      const double k = wavenum(i, n1);
      auto& c = spec[static_cast<size_t>(j) * n1 + i];
      const double kx = kTwoPi * k;
      const double ky = kTwoPi * (l - t1 * k) / t2;
      const double sym = -(kx * kx + ky * ky);
      if (sym == 0.0) {
        // zero mode and Nyquist-killed modes: content here cannot be inverted
        if (!(i == 0 && j == 0)) dropped += std::abs(c);
        c = 0.0;
      } else {
        c /= sym;
      }
    }
  }
  res.phi = inverse(spec);
  res.residual = dropped / grid_->size();
  return res;
}

ScalarField Spectral::deriv_x_adjoint(const ScalarField& f) const {
  ScalarField d = deriv_x(f);
  for (auto& v : d.data) v = -v;
  return d;
}

ScalarField Spectral::deriv_y_adjoint(const ScalarField& f) const {
  ScalarField d = deriv_y(f);
  for (auto& v : d.data) v = -v;
  return d;
}

ScalarField Spectral::poisson_adjoint(const ScalarField& f) const { return poisson(f).phi; }

double integrate(const ScalarField& f) {
  double s = 0;
  for (double v : f.data) s += v;
  return s * f.grid->jacobian();
}

double grid_mean(const ScalarField& f) {
  double s = 0;
  for (double v : f.data) s += v;
  return s / f.size();
}

// ---------------------------------------------------------------------------

namespace {

// 6-point Lagrange interpolation weights for fractional offset t in [0,1)
// relative to the stencil {-2,-1,0,1,2,3}.
inline void lagrange6(double t, double w[6]) {
  static const double nodes[6] = {-2, -1, 0, 1, 2, 3};
  for (int i = 0; i < 6; ++i) {
    double num = 1.0, den = 1.0;
    for (int j = 0; j < 6; ++j) {
      if (j == i) continue;
      num *= (t - nodes[j]);
      den *= (nodes[i] - nodes[j]);
    }
    w[i] = num / den;
  }
}

std::vector<double> upsample_plane(const Spectral& sp, const ScalarField& f, int q, int& n1f, int& n2f) {
  const auto& g = *f.grid;
  const int n1 = g.n1(), n2 = g.n2();
  n1f = n1 * q;
  n2f = n2 * q;
  auto spec = sp.forward(f);

  std::vector<std::complex<double>> fine(static_cast<size_t>(n1f) * n2f, 0.0);
  for (int j = 0; j < n2; ++j) {
    int jf = (j <= n2 / 2) ? j : j - n2 + n2f;
    for (int i = 0; i < n1; ++i) {
      int ifn = (i <= n1 / 2) ? i : i - n1 + n1f;
      std::complex<double> c = spec[static_cast<size_t>(j) * n1 + i];
      // split Nyquist rows/columns symmetrically
      double wsplit = 1.0;
      if (2 * i == n1) wsplit *= 0.5;
      if (2 * j == n2) wsplit *= 0.5;
      c *= wsplit;
      fine[static_cast<size_t>(jf) * n1f + ifn] += c;
      if (2 * i == n1) fine[static_cast<size_t>(jf) * n1f + (n1f - n1 / 2)] += c;
      if (2 * j == n2) {
        fine[static_cast<size_t>(n2f - n2 / 2) * n1f + ifn] += c;
        if (2 * i == n1) fine[static_cast<size_t>(n2f - n2 / 2) * n1f + (n1f - n1 / 2)] += c;
      }
    }
  }

  fftw_plan plan = fftw_plan_dft_2d(n2f, n1f, reinterpret_cast<fftw_complex*>(fine.data()),
                                    reinterpret_cast<fftw_complex*>(fine.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> out(static_cast<size_t>(n1f) * n2f);
  const double scale = 1.0 / (static_cast<double>(n1) * n2);
  for (size_t p = 0; p < out.size(); ++p) out[p] = fine[p].real() * scale;
  return out;
}

}  // namespace

Interpolator::Interpolator(const Spectral& sp, const ScalarField& f, int oversample) {
  dim_ = 1;
  fine_ = upsample_plane(sp, f, oversample, n1f_, n2f_);
}

Interpolator::Interpolator(const Spectral& sp, const VectorField& f, int oversample) {
  dim_ = f.dim;
  for (int c = 0; c < dim_; ++c) {
    auto plane = upsample_plane(sp, f.component(c), oversample, n1f_, n2f_);
    fine_.insert(fine_.end(), plane.begin(), plane.end());
  }
}

double Interpolator::value(int plane, double a, double b) const {
  a -= std::floor(a);
  b -= std::floor(b);
  const double x = a * n1f_;
  const double y = b * n2f_;
  const int i0 = static_cast<int>(std::floor(x));
  const int j0 = static_cast<int>(std::floor(y));
  double wx[6], wy[6];
  lagrange6(x - i0, wx);
  lagrange6(y - j0, wy);
  const double* base = fine_.data() + static_cast<size_t>(plane) * n1f_ * n2f_;
  double acc = 0.0;
  for (int dj = 0; dj < 6; ++dj) {
    int j = (j0 + dj - 2) % n2f_;
    if (j < 0) j += n2f_;
    double row = 0.0;
    for (int di = 0; di < 6; ++di) {
      int i = (i0 + di - 2) % n1f_;
      if (i < 0) i += n1f_;
      row += wx[di] * base[static_cast<size_t>(j) * n1f_ + i];
    }
    acc += wy[dj] * row;
  }
  return acc;
}

double Interpolator::eval(double a, double b) const { return value(0, a, b); }

Vec Interpolator::eval_vec(double a, double b) const {
  Vec r = Vec::zero(dim_);
  for (int c = 0; c < dim_; ++c) r[c] = value(c, a, b);
  return r;
}

void curve_derivative(const std::vector<Vec>& samples, std::vector<Vec>& out) {
  const int n = static_cast<int>(samples.size());
  require(n >= 4, ErrorCode::invalid_argument, "curve_derivative: too few samples");
  const int m = samples.front().dim;
  out.assign(samples.size(), Vec::zero(m));

  std::vector<std::complex<double>> buf(static_cast<size_t>(n));
  fftw_plan fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_plan bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  for (int c = 0; c < m; ++c) {
    for (int p = 0; p < n; ++p) buf[p] = samples[p][c];
    fftw_execute_dft(fwd, reinterpret_cast<fftw_complex*>(buf.data()), reinterpret_cast<fftw_complex*>(buf.data()));
    for (int p = 0; p < n; ++p) {
      const double k = wavenum(p, n);
      buf[p] *= std::complex<double>(0.0, kTwoPi * k);
    }
    fftw_execute_dft(bwd, reinterpret_cast<fftw_complex*>(buf.data()), reinterpret_cast<fftw_complex*>(buf.data()));
    for (int p = 0; p < n; ++p) out[p][c] = buf[p].real() / n;
  }
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
}

}  // namespace fel

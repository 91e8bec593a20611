#include "immersion.hpp"

#include <random>
#include <sstream>

namespace fel {

ImmersionCheck check_immersion(const Immersion& imm, double rel_floor) {
  Spectral sp(imm.grid());
  VectorField px = sp.deriv_x(imm.phi);
  VectorField py = sp.deriv_y(imm.phi);
  ImmersionCheck chk;
  chk.min_singular = std::numeric_limits<double>::infinity();
  chk.max_singular = 0.0;
  const int n = imm.grid()->size();
  for (int p = 0; p < n; ++p) {
    const Vec vx = px.vec_at(p), vy = py.vec_at(p);
    const double g11 = dot(vx, vx), g12 = dot(vx, vy), g22 = dot(vy, vy);
    const double tr = g11 + g22;
    const double disc = std::sqrt(std::max(0.0, sqr(g11 - g22) + 4 * sqr(g12)));
    const double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
    chk.min_singular = std::min(chk.min_singular, std::sqrt(std::max(0.0, lo)));
    chk.max_singular = std::max(chk.max_singular, std::sqrt(hi));
  }
  chk.ok = chk.min_singular > rel_floor * chk.max_singular && chk.max_singular > 0;
  return chk;
}

Immersion clifford(GridPtr grid) {
  require(std::abs(grid->tau().tau1) < 1e-12 && std::abs(grid->tau().tau2 - 1.0) < 1e-12,
          ErrorCode::invalid_argument, "clifford: requires the square lattice tau = (0,1)");
  Immersion imm;
  imm.phi = VectorField(grid, 4);
  imm.label = "clifford";
  for (int j = 0; j < grid->n2(); ++j) {
    const double y = grid->b_of(j);
    for (int i = 0; i < grid->n1(); ++i) {
      const double x = grid->a_of(i);
      const int p = grid->index(i, j);
      imm.phi.at(0, p) = std::cos(kTwoPi * x);
      imm.phi.at(1, p) = std::sin(kTwoPi * x);
      imm.phi.at(2, p) = std::cos(kTwoPi * y);
      imm.phi.at(3, p) = std::sin(kTwoPi * y);
    }
  }
  return imm;
}

double rotational_conformal_tau2(double R, double r) {
  require(R > r && r > 0, ErrorCode::degenerate_input, "rotational torus requires R > r > 0");
  return r / std::sqrt(R * R - r * r);
}

double rotational_willmore_closed_form(double R, double r) {
  return kPi * kPi * R * R / (r * std::sqrt(R * R - r * r));
}

namespace {

// 20-point Gauss-Legendre nodes/weights on [-1,1].
struct GL20 {
  double x[20];
  double w[20];
  GL20() {
    // Computed by Newton iteration on Legendre P20 at startup.
    for (int i = 0; i < 20; ++i) {
      double t = std::cos(kPi * (i + 0.75) / 20.5);
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= 20; ++k) {
          double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = 20 * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= 20; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = 20 * (t * p1 - p0) / (t * t - 1.0);
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

// integral of r/(R + r cos u) du over [v0, v1]
double meridian_time(double R, double r, double v0, double v1) {
  static const GL20 gl;
  const double mid = 0.5 * (v0 + v1), half = 0.5 * (v1 - v0);
  double s = 0;
  for (int i = 0; i < 20; ++i) {
    const double u = mid + half * gl.x[i];
    s += gl.w[i] * r / (R + r * std::cos(u));
  }
  return s * half;
}

}  // namespace

Immersion rotational_conformal(double R, double r, GridPtr grid, double tau_tol) {
  const double tau2 = rotational_conformal_tau2(R, r);
  if (std::abs(grid->tau().tau1) > tau_tol || std::abs(grid->tau().tau2 - tau2) > tau_tol) {
    std::ostringstream os;
    os << "rotational_conformal: lattice mismatch, conformal class is tau = (0, " << tau2 << ")";
    fail(ErrorCode::invalid_argument, os.str());
  }

  // Solve r dv/ds = R + r cos v on s in [0, 2*pi*tau2], v(0) = 0: march the
  // grid nodes with per-interval Gauss-Legendre quadrature and Newton.
  const int n2 = grid->n2();
  std::vector<double> v(n2 + 1, 0.0);
  const double ds = kTwoPi * tau2 / n2;
  for (int j = 1; j <= n2; ++j) {
    double guess = v[j - 1] + ds * (R + r * std::cos(v[j - 1])) / r;
    for (int it = 0; it < 60; ++it) {
      const double f = meridian_time(R, r, v[j - 1], guess) - ds;
      const double fp = r / (R + r * std::cos(guess));
      const double step = f / fp;
      guess -= step;
      if (std::abs(step) < 1e-15) break;
    }
    v[j] = guess;
  }
  require(std::abs(v[n2] - kTwoPi) < 1e-9, ErrorCode::numeric_failure,
          "rotational_conformal: meridian period mismatch");

  Immersion imm;
  imm.phi = VectorField(grid, 3);
  {
    std::ostringstream os;
    os << "rotational(R=" << R << ",r=" << r << ")";
    imm.label = os.str();
  }
  for (int j = 0; j < n2; ++j) {
    const double vj = v[j];
    const double rad = R + r * std::cos(vj);
    const double z = r * std::sin(vj);
    for (int i = 0; i < grid->n1(); ++i) {
      const double u = kTwoPi * grid->a_of(i);
      const int p = grid->index(i, j);
      imm.phi.at(0, p) = rad * std::cos(u);
      imm.phi.at(1, p) = rad * std::sin(u);
      imm.phi.at(2, p) = z;
    }
  }
  return imm;
}

Immersion twisted_figure_eight(GridPtr grid, double scale) {
  require(std::abs(grid->tau().tau1) < 0.1 && grid->tau().tau2 > 0.5 && grid->tau().tau2 < 2.0,
          ErrorCode::invalid_argument, "twisted_figure_eight: requires a square-ish lattice");
  require(scale > 0, ErrorCode::invalid_argument, "twisted_figure_eight: scale must be positive");
  // the cross-section diameter (2.5 * scale) must stay below the unit sweep radius
  if (2.5 * scale >= 1.0) {
    std::ostringstream os;
    os << "twisted_figure_eight: scale " << scale << " too large for the unit sweep radius";
    fail(ErrorCode::degenerate_input, os.str());
  }

  Immersion imm;
  imm.phi = VectorField(grid, 3);
  {
    std::ostringstream os;
    os << "figure8(scale=" << scale << ")";
    imm.label = os.str();
  }
  for (int j = 0; j < grid->n2(); ++j) {
    const double vv = kTwoPi * grid->b_of(j);
    const double e1c = scale * std::sin(vv);
    const double e2c = scale * std::sin(2 * vv);
    for (int i = 0; i < grid->n1(); ++i) {
      const double u = kTwoPi * grid->a_of(i);
      // cross-section plane spanned by (radial, z), spinning by u per revolution
      const double cr = e1c * std::cos(u) - e2c * std::sin(u);
      const double cz = e1c * std::sin(u) + e2c * std::cos(u);
      const int p = grid->index(i, j);
      imm.phi.at(0, p) = (1.0 + cr) * std::cos(u);
      imm.phi.at(1, p) = (1.0 + cr) * std::sin(u);
      imm.phi.at(2, p) = cz;
    }
  }
  const auto chk = check_immersion(imm);
  if (!chk.ok) {
    std::ostringstream os;
    os << "twisted_figure_eight: immersion floor violated (scale " << scale << " too large for unit sweep radius)";
    fail(ErrorCode::degenerate_input, os.str());
  }
  return imm;
}

Immersion fourier_perturb(const Immersion& base, uint64_t seed, double amplitude, int max_mode) {
  require(max_mode >= 1, ErrorCode::invalid_argument, "fourier_perturb: max_mode must be >= 1");
  require(amplitude >= 0, ErrorCode::invalid_argument, "fourier_perturb: amplitude must be >= 0");
  const auto& g = *base.grid();

  double amp = amplitude;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    Immersion out;
    out.phi = base.phi;
    {
      std::ostringstream os;
      os << base.label << "+fourier(seed=" << seed << ",amp=" << amp << ",K=" << max_mode << ")";
      out.label = os.str();
    }
    if (amp > 0) {
      std::mt19937_64 rng(seed);
      auto draw = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
      for (int c = 0; c < base.dim(); ++c) {
        // build the trig polynomial on the grid
        std::vector<double> delta(static_cast<size_t>(g.size()), 0.0);
        for (int k = -max_mode; k <= max_mode; ++k) {
          for (int l = -max_mode; l <= max_mode; ++l) {
            if (k == 0 && l == 0) continue;
            if (k < 0 || (k == 0 && l < 0)) continue;  // one representative per conjugate pair
            const double ca = draw(), cb = draw();
            for (int j = 0; j < g.n2(); ++j) {
              for (int i = 0; i < g.n1(); ++i) {
                const double ph = kTwoPi * (k * g.a_of(i) + l * g.b_of(j));
                delta[static_cast<size_t>(g.index(i, j))] += ca * std::cos(ph) + cb * std::sin(ph);
              }
            }
          }
        }
        double mx = 0;
        for (double v : delta) mx = std::max(mx, std::abs(v));
        const double s = (mx > 0) ? amp / mx : 0.0;
        double* plane = out.phi.plane(c);
        for (int p = 0; p < g.size(); ++p) plane[p] += s * delta[static_cast<size_t>(p)];
      }
    }
    if (check_immersion(out).ok) return out;
    amp *= 0.5;
  }
  fail(ErrorCode::degenerate_input, "fourier_perturb: immersion floor unreachable after 8 retries");
}

Immersion transform(const Immersion& imm, double scale, const std::vector<double>& rot, const Vec& translation) {
  const int m = imm.dim();
  require(scale > 0, ErrorCode::invalid_argument, "transform: scale must be positive");
  require(static_cast<int>(rot.size()) == m * m, ErrorCode::invalid_argument, "transform: rotation must be m x m");
  // orthogonality to 1e-12
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (int k = 0; k < m; ++k) s += rot[static_cast<size_t>(k * m + i)] * rot[static_cast<size_t>(k * m + j)];
      const double target = (i == j) ? 1.0 : 0.0;
      require(std::abs(s - target) <= 1e-12, ErrorCode::invalid_argument, "transform: rotation is not orthogonal");
    }
  }
  Immersion out;
  out.phi = VectorField(imm.grid(), m);
  out.label = imm.label + "+affine";
  const int n = imm.grid()->size();
  for (int p = 0; p < n; ++p) {
    const Vec x = imm.phi.vec_at(p);
    Vec y = Vec::zero(m);
    for (int i = 0; i < m; ++i) {
      double s = 0;
      for (int j = 0; j < m; ++j) s += rot[static_cast<size_t>(i * m + j)] * x[j];
      y[i] = scale * s + translation[i];
    }
    out.phi.set_vec(p, y);
  }
  return out;
}

}  // namespace fel

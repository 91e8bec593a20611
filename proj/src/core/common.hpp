#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fel {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error carried across the library; the C API maps `code` onto fel_status.
enum class ErrorCode {
  invalid_argument = 1,
  degenerate_input = 2,
  gauge_failure = 3,
  numeric_failure = 4,
  io_failure = 5,
  unreliable = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Fixed-capacity ambient vector; dim is 3 or 4 at runtime.
struct Vec {
  std::array<double, 4> v{0, 0, 0, 0};
  int dim = 3;

  Vec() = default;
  Vec(double x, double y, double z) : v{x, y, z, 0}, dim(3) {}
  Vec(double x, double y, double z, double w) : v{x, y, z, w}, dim(4) {}
  static Vec zero(int m) {
    Vec r;
    r.dim = m;
    return r;
  }
  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim; ++i) v[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a.v[i] * b.v[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// R^3 only.
inline Vec cross(const Vec& a, const Vec& b) {
  Vec r;
  r.dim = 3;
  r.v[0] = a.v[1] * b.v[2] - a.v[2] * b.v[1];
  r.v[1] = a.v[2] * b.v[0] - a.v[0] * b.v[2];
  r.v[2] = a.v[0] * b.v[1] - a.v[1] * b.v[0];
  return r;
}

inline double sqr(double x) { return x * x; }

}  // namespace fel

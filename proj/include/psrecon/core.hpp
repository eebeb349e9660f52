#pragma once

#include <charconv>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <system_error>
#include <cmath>
#include <type_traits>

namespace psrecon {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Bad arguments or configuration. CLI exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point or parameter outside the admissible domain (|x| >= 1, s <= h, ...).
class DomainError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Degenerate configuration, e.g. a zero denominator in a ratio.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or root iteration did not converge. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Neumaier compensated sum; the result does not depend on summation order
/// beyond a few ulps.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if constexpr (std::is_same_v<T, double>) {
      comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    } else {
      comp_ += T(fix(sum_.real(), v.real(), t.real()), fix(sum_.imag(), v.imag(), t.imag()));
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double fix(double s, double v, double t) {
    return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
  }
  T sum_{};
  T comp_{};
};

/// Shortest text with 17 significant digits.
inline std::string fmt17(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

}  // namespace psrecon

#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"

namespace psrecon {

enum class ModelKind { PoincareDisk, ComplexBall, RealBall };

inline constexpr int kMaxRealDim = 8;

/// One of the three hyperbolic ball models.
class Model {
 public:
  static Model disk() { return Model(ModelKind::PoincareDisk, 1); }
  static Model complex_ball(int d) {
    if (d < 1 || 2 * d > kMaxRealDim) throw UsageError("complex ball dimension must be in [1, 4]");
    return Model(ModelKind::ComplexBall, d);
  }
  static Model real_ball(int m) {
    if (m < 2 || m > kMaxRealDim) throw UsageError("real ball dimension must be in [2, 8]");
    return Model(ModelKind::RealBall, m);
  }
  /// Parses "disk", "complex:D" or "real:M".
  static Model parse(const std::string& s) {
    if (s == "disk") return disk();
    auto colon = s.find(':');
    if (colon != std::string::npos) {
      std::string head = s.substr(0, colon);
      int n = 0;
      try {
        n = std::stoi(s.substr(colon + 1));
      } catch (const std::exception&) {
        throw UsageError("bad model dimension in '" + s + "'");
      }
      if (head == "complex") return complex_ball(n);
      if (head == "real") return real_ball(n);
    }
    throw UsageError("unknown model '" + s + "' (expected disk, complex:D or real:M)");
  }

  ModelKind kind() const { return kind_; }
  /// Complex dimension for the disk and complex balls, real dimension otherwise.
  int dim() const { return dim_; }
  int real_dim() const { return kind_ == ModelKind::RealBall ? dim_ : 2 * dim_; }
  double entropy() const { return kind_ == ModelKind::RealBall ? dim_ - 1.0 : double(dim_); }
  /// Exponent k in the volume density (1 - |x|^2)^(-k).
  int density_exponent() const { return kind_ == ModelKind::RealBall ? dim_ : dim_ + 1; }
  bool is_complex() const { return kind_ != ModelKind::RealBall; }
  std::string name() const {
    switch (kind_) {
      case ModelKind::PoincareDisk: return "disk";
      case ModelKind::ComplexBall: return "complex:" + std::to_string(dim_);
      default: return "real:" + std::to_string(dim_);
    }
  }
  bool operator==(const Model&) const = default;

 private:
  Model(ModelKind k, int d) : kind_(k), dim_(d) {}
  ModelKind kind_;
  int dim_;
};

/// Real coordinates of a point of the ball; complex models interleave (re, im).
struct Coords {
  ModelKind kind = ModelKind::PoincareDisk;
  int n = 2;
  std::array<double, kMaxRealDim> c{};

  double norm2() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += c[i] * c[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
  cplx z(int k = 0) const { return {c[2 * k], c[2 * k + 1]}; }
  void set_z(int k, cplx v) {
    c[2 * k] = v.real();
    c[2 * k + 1] = v.imag();
  }
  bool operator==(const Coords&) const = default;
};

/// Interior point, |x| < 1.
struct Point : Coords {};

/// Boundary point, |xi| = 1.
struct BoundaryPoint : Coords {};

inline constexpr double kEdgeGuard = 1e-14;

namespace detail {

template <class P>
P make_coords(const Model& m, std::span<const double> xs) {
  if (static_cast<int>(xs.size()) != m.real_dim())
    throw UsageError("coordinate count " + std::to_string(xs.size()) + " does not match model " + m.name());
  P p;
  p.kind = m.kind();
  p.n = m.real_dim();
  for (int i = 0; i < p.n; ++i) p.c[i] = xs[i];
  return p;
}

inline void check_same(const Model& m, const Coords& x) {
  if (x.kind != m.kind() || x.n != m.real_dim()) throw UsageError("point does not belong to model " + m.name());
}

inline void check_point(const Model& m, const Point& x) {
  check_same(m, x);
  if (!(x.norm() < 1 - kEdgeGuard)) throw DomainError("point outside the open ball (|x| = " + fmt17(x.norm()) + ")");
}

inline void check_boundary(const Model& m, const BoundaryPoint& xi) {
  check_same(m, xi);
  if (std::abs(xi.norm() - 1) > 1e-12) throw DomainError("boundary point is not on the unit sphere");
}

/// Hermitian product <z, w> = sum z_k conj(w_k).
inline cplx herm(const Coords& z, const Coords& w) {
  cplx s = 0;
  for (int k = 0; k < z.n / 2; ++k) s += z.z(k) * std::conj(w.z(k));
  return s;
}

inline double dot(const Coords& a, const Coords& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double dist2(const Coords& a, const Coords& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) {
    double d = a.c[i] - b.c[i];
    s += d * d;
  }
  return s;
}

/// d = log((1+t)/(1-t)) given t^2 and 1 - t^2 computed without cancellation.
inline double dist_from(double t2, double one_minus_t2) {
  double t = std::sqrt(t2);
  return 2 * std::log1p(t) - std::log(one_minus_t2);
}

/// Squared modulus of the centering involution and its complement 1 - |.|^2.
inline std::pair<double, double> involution_modulus2(const Coords& x, const Coords& y) {
  double nx = x.norm2(), ny = y.norm2();
  if (x.kind == ModelKind::RealBall) {
    double e = dist2(x, y);
    double q = (1 - nx) * (1 - ny);
    double br = e + q;
    return {e / br, q / br};
  }
  cplx h = herm(y, x);
  double den = std::norm(1.0 - h);
  double lag = 0;
  for (int j = 0; j < x.n / 2; ++j)
    for (int k = j + 1; k < x.n / 2; ++k) lag += std::norm(y.z(j) * x.z(k) - y.z(k) * x.z(j));
  double num = std::max(0.0, dist2(x, y) - lag);
  return {num / den, (1 - nx) * (1 - ny) / den};
}

inline double dist_unchecked(const Coords& x, const Coords& y) {
  auto [t2, c] = involution_modulus2(x, y);
  return dist_from(t2, c);
}

inline double log_sinh(double a) {
  if (a < 1) return std::log(std::sinh(a));
  return a + std::log1p(-std::exp(-2 * a)) - std::log(2.0);
}

inline double log_cosh(double a) { return a + std::log1p(std::exp(-2 * a)) - std::log(2.0); }

}  // namespace detail

inline Point make_point(const Model& m, std::span<const double> xs) {
  Point p = detail::make_coords<Point>(m, xs);
  detail::check_point(m, p);
  return p;
}
inline Point make_point(const Model& m, std::initializer_list<double> xs) {
  return make_point(m, std::span<const double>(xs.begin(), xs.size()));
}
inline Point disk_point(cplx z) { return make_point(Model::disk(), {z.real(), z.imag()}); }
inline Point complex_point(const Model& m, std::initializer_list<cplx> zs) {
  std::vector<double> xs;
  for (cplx z : zs) {
    xs.push_back(z.real());
    xs.push_back(z.imag());
  }
  return make_point(m, xs);
}
inline Point origin(const Model& m) {
  Point p;
  p.kind = m.kind();
  p.n = m.real_dim();
  return p;
}

inline BoundaryPoint make_boundary(const Model& m, std::span<const double> xs) {
  BoundaryPoint p = detail::make_coords<BoundaryPoint>(m, xs);
  detail::check_boundary(m, p);
  return p;
}
inline BoundaryPoint make_boundary(const Model& m, std::initializer_list<double> xs) {
  return make_boundary(m, std::span<const double>(xs.begin(), xs.size()));
}
inline BoundaryPoint disk_boundary(double theta) {
  return make_boundary(Model::disk(), {std::cos(theta), std::sin(theta)});
}

/// Hyperbolic distance.
inline double dist(const Model& m, const Point& x, const Point& y) {
  detail::check_point(m, x);
  detail::check_point(m, y);
  return detail::dist_unchecked(x, y);
}

/// Centering involution phi_w (complex models) or psi_w (real ball).
inline Point involution(const Model& m, const Point& w, const Point& x) {
  detail::check_point(m, w);
  detail::check_point(m, x);
  Point out = x;
  double nw = w.norm2();
  if (m.kind() == ModelKind::RealBall) {
    double e = detail::dist2(x, w);
    double q = 1 - nw;
    double den = e + q * (1 - x.norm2());
    for (int i = 0; i < x.n; ++i) out.c[i] = (w.c[i] * e + q * (w.c[i] - x.c[i])) / den;
    return out;
  }
  if (nw == 0) {
    for (int i = 0; i < x.n; ++i) out.c[i] = -x.c[i];
    return out;
  }
  cplx h = detail::herm(x, w);
  cplx den = 1.0 - h;
  double sw = std::sqrt(1 - nw);
  for (int k = 0; k < x.n / 2; ++k) {
    cplx p = h / nw * w.z(k);
    cplx q = x.z(k) - p;
    out.set_z(k, (w.z(k) - p - sw * q) / den);
  }
  return out;
}

/// Busemann cocycle B_xi(x, y) from the closed formulas.
inline double busemann(const Model& m, const BoundaryPoint& xi, const Point& x, const Point& y) {
  detail::check_boundary(m, xi);
  detail::check_point(m, x);
  detail::check_point(m, y);
  double nx = x.norm2(), ny = y.norm2();
  if (m.kind() == ModelKind::RealBall) {
    return std::log(detail::dist2(x, xi) / (1 - nx)) - std::log(detail::dist2(y, xi) / (1 - ny));
  }
  double ax = std::norm(1.0 - detail::herm(xi, x));
  double ay = std::norm(1.0 - detail::herm(xi, y));
  return std::log((1 - ny) * ax) - std::log((1 - nx) * ay);
}

namespace detail {

inline double poisson_kernel_unchecked(const Model& m, const Coords& x, const Coords& xi) {
  double q = 1 - x.norm2();
  if (m.kind() == ModelKind::RealBall) return std::pow(q / dist2(x, xi), m.dim() - 1);
  double base = q / std::norm(1.0 - herm(x, xi));
  return m.dim() == 1 ? base : std::pow(base, m.dim());
}

}  // namespace detail

/// Boundary kernel P(x, xi) = exp(-h B_xi(x, o)).
inline double poisson_kernel(const Model& m, const Point& x, const BoundaryPoint& xi) {
  detail::check_point(m, x);
  detail::check_boundary(m, xi);
  return detail::poisson_kernel_unchecked(m, x, xi);
}

/// Density of the invariant volume against Lebesgue measure.
inline double volume_density(const Model& m, const Point& x) {
  detail::check_point(m, x);
  return std::pow(1 - x.norm2(), -m.density_exponent());
}

/// Log of the area of the geodesic sphere of radius rho, i.e. d/dr ball_volume.
inline double log_sphere_area(const Model& m, double rho) {
  if (rho <= 0) return -INFINITY;
  if (m.kind() == ModelKind::RealBall) {
    int k = m.dim();
    double c = 0.5 * k * std::log(kPi) - std::lgamma(0.5 * k);
    return c + (k - 1) * (detail::log_sinh(rho) - std::log(2.0));
  }
  int d = m.dim();
  double c = d * std::log(kPi) - std::lgamma(double(d));
  return c + (2 * d - 1) * detail::log_sinh(0.5 * rho) + detail::log_cosh(0.5 * rho);
}

/// log_sphere_area(m, rho) - h rho, with the exponential growth removed
/// exactly so that large radii keep full relative precision.
inline double log_sphere_area_excess(const Model& m, double rho) {
  if (rho <= 0) return -INFINITY;
  if (rho < 1) return log_sphere_area(m, rho) - m.entropy() * rho;
  const double l2 = std::log(2.0);
  if (m.kind() == ModelKind::RealBall) {
    int k = m.dim();
    double c = 0.5 * k * std::log(kPi) - std::lgamma(0.5 * k);
    return c + (k - 1) * (std::log1p(-std::exp(-2 * rho)) - 2 * l2);
  }
  int d = m.dim();
  double c = d * std::log(kPi) - std::lgamma(double(d));
  return c + (2 * d - 1) * (std::log1p(-std::exp(-rho)) - l2) + std::log1p(std::exp(-rho)) - l2;
}

inline double sphere_area(const Model& m, double rho) { return rho <= 0 ? 0.0 : std::exp(log_sphere_area(m, rho)); }

/// mu(B(o, r)) by adaptive Gauss–Legendre over the geodesic radius.
inline double ball_volume(const Model& m, double r) {
  if (!(r >= 0)) throw UsageError("ball_volume: negative radius");
  if (r == 0) return 0;
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-14;
  std::vector<double> breaks;
  for (double b = 1; b < r; b *= 2) breaks.push_back(b);
  return adaptive_gl_breaks([&](double rho) { return sphere_area(m, rho); }, 0, r, breaks, opt).value;
}

/// Euclidean radius of the point at geodesic distance rho from o.
inline double euclid_radius(double rho) { return std::tanh(0.5 * rho); }

/// Geodesic distance from o of a point at Euclidean radius t.
inline double geodesic_radius(double t) { return 2 * std::atanh(t); }

}  // namespace psrecon

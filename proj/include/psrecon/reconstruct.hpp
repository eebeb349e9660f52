#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "boundary.hpp"
#include "processes.hpp"
#include "weights.hpp"

namespace psrecon {

/// Decreasing exponents s_1 > s_2 > ... > h. Stores the gaps s_n - h so that
/// tiny gaps are not rounded away.
class Schedule {
 public:
  enum class Kind { InverseSquare, SquareSummable, Summable, LogSlow };

  /// s_n = h + n^-2.
  static Schedule inverse_square(double h, int terms) {
    std::vector<double> gaps;
    for (int n = 1; n <= terms; ++n) gaps.push_back(1.0 / (double(n) * n));
    return Schedule(Kind::InverseSquare, h, std::move(gaps));
  }
  /// Custom gaps, checked against the summability condition of the kind.
  static Schedule custom(Kind kind, double h, std::vector<double> gaps) {
    Schedule s(kind, h, std::move(gaps));
    if (!s.satisfies_condition()) throw UsageError("schedule prefix does not satisfy its summability condition");
    return s;
  }
  /// s_n = 1 + exp(-n^2) on the disk; sum 1/|log(s_n - 1)| = sum n^-2.
  static Schedule log_slow(int terms) {
    std::vector<double> gaps;
    for (int n = 1; n <= terms; ++n) gaps.push_back(std::exp(-double(n) * n));
    return Schedule(Kind::LogSlow, 1.0, std::move(gaps));
  }

  Kind kind() const { return kind_; }
  double h() const { return h_; }
  std::size_t size() const { return gaps_.size(); }
  double gap(std::size_t i) const { return gaps_[i]; }
  double value(std::size_t i) const { return h_ + gaps_[i]; }

  /// Term whose series must converge for this kind.
  double term(std::size_t i) const {
    double g = gaps_[i];
    switch (kind_) {
      case Kind::SquareSummable:
      case Kind::InverseSquare: return g * g;
      case Kind::Summable: return g;
      default: return 1 / std::abs(std::log(g));
    }
  }

  /// Strictly decreasing positive gaps, and the series terms on the second
  /// half of the prefix decaying at least like n^-p with p > 1 (log-log slope).
  bool satisfies_condition() const {
    if (gaps_.empty()) return false;
    for (std::size_t i = 0; i < gaps_.size(); ++i) {
      if (!(gaps_[i] > 0)) return false;
      if (i > 0 && !(gaps_[i] < gaps_[i - 1])) return false;
    }
    if (kind_ == Kind::LogSlow)
      for (double g : gaps_)
        if (!(g < 1)) return false;
    if (gaps_.size() < 4) return true;
    std::size_t lo = gaps_.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = lo; i < gaps_.size(); ++i, ++k) {
      double x = std::log(double(i + 1)), y = std::log(term(i));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return slope < -1;
  }

 private:
  Schedule(Kind k, double h, std::vector<double> gaps) : kind_(k), h_(h), gaps_(std::move(gaps)) {}
  Kind kind_;
  double h_;
  std::vector<double> gaps_;
};

namespace detail {

/// Radial profile phi with P[xi_1](x) = x_1 phi(|x|^2) on the real ball B^m,
/// phi(t) = F(1, 1 - m/2; 1 + m/2; t) / F(1, 1 - m/2; 1 + m/2; 1).
inline double real_coordinate_profile(int m, double t) {
  const double b = 1 - 0.5 * m, c = 1 + 0.5 * m;
  const double at_one = std::exp(std::lgamma(c) + std::lgamma(m - 1.0) - std::lgamma(c - 1) - std::lgamma(c - b));
  if (m == 3 && t >= 0.5) {
    double r = std::sqrt(t);
    return ((1 + t) - (1 - t) * (1 - t) * std::atanh(r) / r) / (2 * t);
  }
  double term = 1, sum = 1;
  for (int n = 0; n < 200000; ++n) {
    term *= (1 + n) * (b + n) / ((c + n) * (1 + n)) * t;
    sum += term;
    if (term == 0 || std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / at_one;
}

}  // namespace detail

/// Function to reconstruct: a constant, the Poisson extension of boundary
/// data, a kernel pole P(., xi0), or the harmonic extension of the first
/// boundary coordinate (z on the disk, z_1 on complex balls, x_1 phi(|x|^2)
/// on real balls).
class TargetFunction {
 public:
  enum class Kind { Constant, BoundaryData, KernelPole, Coordinate };

  static TargetFunction constant(cplx c) {
    TargetFunction f(Kind::Constant);
    f.c_ = c;
    return f;
  }
  static TargetFunction boundary_data(BoundaryFunction g) {
    TargetFunction f(Kind::BoundaryData);
    f.model_ = g.model();
    f.g_ = std::move(g);
    return f;
  }
  static TargetFunction kernel_pole(const Model& m, const BoundaryPoint& xi0) {
    detail::check_boundary(m, xi0);
    TargetFunction f(Kind::KernelPole);
    f.model_ = m;
    f.xi0_ = xi0;
    return f;
  }

  static TargetFunction coordinate(const Model& m) {
    TargetFunction f(Kind::Coordinate);
    f.model_ = m;
    return f;
  }

  Kind kind() const { return kind_; }

  cplx operator()(const Model& m, const Coords& x) const {
    switch (kind_) {
      case Kind::Constant: return c_;
      case Kind::BoundaryData:
        if (!(m == model_)) throw UsageError("target function belongs to a different model");
        return detail::poisson_extend_unchecked(*g_, x);
      case Kind::KernelPole:
        if (!(m == model_)) throw UsageError("target function belongs to a different model");
        return detail::poisson_kernel_unchecked(m, x, xi0_);
      default:
        if (!(m == model_)) throw UsageError("target function belongs to a different model");
        if (m.kind() != ModelKind::RealBall) return x.z(0);
        return x.c[0] * detail::real_coordinate_profile(m.real_dim(), x.norm2());
    }
  }

 private:
  explicit TargetFunction(Kind k) : kind_(k) {}
  Kind kind_;
  Model model_ = Model::disk();
  cplx c_ = 0;
  std::optional<BoundaryFunction> g_;
  BoundaryPoint xi0_;
};

/// d(z, x) for every point of the configuration.
inline std::vector<double> distances(const Configuration& conf, const Point& z) {
  detail::check_point(conf.model, z);
  std::vector<double> d(conf.size());
  for (std::size_t i = 0; i < conf.size(); ++i) d[i] = detail::dist_unchecked(z, conf.points[i]);
  return d;
}

/// sigma(z, s; X) = sum exp(-s d(z, x)).
inline double sigma(const Configuration& conf, const Point& z, double s) {
  if (!(s > 0)) throw UsageError("sigma needs s > 0");
  CompensatedSum<double> acc;
  for (double d : distances(conf, z)) acc.add(std::exp(-s * d));
  return acc.value();
}

/// Integral over [a, inf) of exp(-s rho) times the sphere area.
inline double radial_exponential_integral(const Model& m, double s, double a = 0) {
  double h = m.entropy();
  if (!(s > h)) throw DomainError("exponential integral diverges for s <= h (s = " + fmt17(s) + ")");
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-14;
  const double gap = s - h;
  auto f = [&](double rho) { return rho <= 0 ? 0.0 : std::exp(log_sphere_area_excess(m, rho) - gap * rho); };
  QuadResult r{};
  if (a < 1) {
    r = adaptive_gl(f, a, 1, opt);
    a = 1;
  }
  double width = std::max(1.0, std::min(8.0, 1 / gap));
  return r.value + adaptive_gl_semi_infinite(f, a, width, opt).value;
}

/// lambda times the integral of exp(-s d(z, x)) against mu; independent of z.
inline double sigma_bar(const Model& m, double lambda, const Point& z, double s) {
  detail::check_point(m, z);
  if (!(s > m.entropy())) throw DomainError("sigma_bar diverges for s <= h (s = " + fmt17(s) + ")");
  if (m.kind() == ModelKind::PoincareDisk) return lambda * kPi / (2 * (s * s - 1));
  return lambda * radial_exponential_integral(m, s);
}

/// Share of the expected exponential mass that lies outside B(o, R).
inline double tail_fraction(const Model& m, const Point& z, double s, double R) {
  detail::check_point(m, z);
  if (!(s > m.entropy())) throw DomainError("tail_fraction needs s > h");
  if (!(R >= 0)) throw UsageError("tail_fraction needs R >= 0");
  if (R == 0) return 1;
  double total = radial_exponential_integral(m, s);
  double dz = detail::dist_unchecked(origin(m), z);
  if (dz == 0) return radial_exponential_integral(m, s, R) / total;
  if (!(R > dz)) throw UsageError("tail_fraction needs the base point inside B(o, R)");
  std::vector<BoundaryPoint> dirs = m.kind() == ModelKind::PoincareDisk
                                        ? QuadratureRule::circle(256).nodes()
                                        : QuadratureRule::sphere_mc(m, 1024, 0x7a11).nodes();
  const Point o = origin(m);
  CompensatedSum<double> acc;
  for (const auto& w : dirs) {
    auto at = [&](double rho) {
      Point y;
      y.kind = m.kind();
      y.n = m.real_dim();
      double t = euclid_radius(rho);
      for (int k = 0; k < y.n; ++k) y.c[k] = t * w.c[k];
      return detail::dist_unchecked(o, involution(m, z, y));
    };
    double lo = 0, hi = R + dz;
    while (hi - lo > 1e-12 * hi) {
      double mid = 0.5 * (lo + hi);
      if (at(mid) <= R)
        lo = mid;
      else
        hi = mid;
    }
    acc.add(radial_exponential_integral(m, s, 0.5 * (lo + hi)));
  }
  return acc.value() / dirs.size() / total;
}

/// Unit-shell sums T_k about z; k runs up to ceil(R + d(o, z)) where R is the
/// truncation radius of the configuration.
inline std::vector<cplx> shell_sums(const Configuration& conf, const Point& z, double s, const TargetFunction& f) {
  if (!(s > 0)) throw UsageError("shell_sums needs s > 0");
  std::vector<double> d = distances(conf, z);
  double reach = conf.truncation_radius() + detail::dist_unchecked(origin(conf.model), z);
  std::size_t len = static_cast<std::size_t>(std::ceil(reach));
  for (double di : d) len = std::max(len, static_cast<std::size_t>(di) + 1);
  std::vector<CompensatedSum<cplx>> acc(len);
  for (std::size_t i = 0; i < d.size(); ++i)
    acc[static_cast<std::size_t>(d[i])].add(std::exp(-s * d[i]) * f(conf.model, conf.points[i]));
  std::vector<cplx> out(len);
  for (std::size_t k = 0; k < len; ++k) out[k] = acc[k].value();
  return out;
}

struct RatioResult {
  double sigma = 0;
  cplx numerator = 0;
  cplx ratio = 0;
  std::optional<double> sigma_bar;
  std::optional<cplx> ratio_normalized;
};

/// R(z, s; X) = sum exp(-s d) f(x) / sigma, and numerator / sigma_bar when
/// the intensity lambda is known.
inline RatioResult ratio_reconstruct(const Configuration& conf, const Point& z, double s, const TargetFunction& f,
                                     std::optional<double> lambda = std::nullopt) {
  if (!(s > conf.model.entropy())) throw DomainError("ratio_reconstruct needs s > h");
  std::vector<double> d = distances(conf, z);
  CompensatedSum<double> sg;
  CompensatedSum<cplx> num;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double w = std::exp(-s * d[i]);
    sg.add(w);
    num.add(w * f(conf.model, conf.points[i]));
  }
  RatioResult r;
  r.sigma = sg.value();
  r.numerator = num.value();
  if (!(r.sigma > 0)) throw DegenerateError("sigma vanishes: empty configuration");
  r.ratio = r.numerator / r.sigma;
  if (!lambda && conf.meta.lambda) lambda = conf.meta.lambda;
  if (lambda) {
    r.sigma_bar = sigma_bar(conf.model, *lambda, z, s);
    r.ratio_normalized = r.numerator / *r.sigma_bar;
  }
  return r;
}

/// Truncated Fourier representation of sum exp(-s d(z, x)) P_x (disk).
inline KernelVector kernel_statistic(const Configuration& conf, const Point& z, double s, int n_max) {
  if (conf.model.kind() != ModelKind::PoincareDisk) throw UsageError("Fourier kernel statistic is disk-only; pass a rule");
  if (!(s > 1)) throw DomainError("kernel_statistic needs s > h");
  std::vector<double> d = distances(conf, z);
  const int len = 2 * n_max + 1;
  std::vector<CompensatedSum<cplx>> acc(len);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double w = std::exp(-s * d[i]);
    cplx xb = std::conj(conf.points[i].z()), p = w;
    acc[n_max].add(p);
    for (int n = 1; n <= n_max; ++n) {
      p *= xb;
      acc[n_max + n].add(p);
      acc[n_max - n].add(std::conj(p));
    }
  }
  KernelVector k = KernelVector::zeros(Model::disk(), KernelSpace::BoundaryFourier, n_max);
  for (int i = 0; i < len; ++i) k.v[i] = acc[i].value();
  return k;
}

/// Node representation of sum exp(-s d(z, x)) P_x on a boundary rule (any model).
inline KernelVector kernel_statistic(const Configuration& conf, const Point& z, double s, RulePtr rule) {
  if (!(rule->model() == conf.model)) throw UsageError("rule belongs to a different model");
  if (!(s > conf.model.entropy())) throw DomainError("kernel_statistic needs s > h");
  std::vector<double> d = distances(conf, z);
  const auto& nodes = rule->nodes();
  std::vector<CompensatedSum<double>> acc(nodes.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double w = std::exp(-s * d[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j)
      acc[j].add(w * detail::poisson_kernel_unchecked(conf.model, conf.points[i], nodes[j]));
  }
  KernelVector k = KernelVector::zeros(conf.model, KernelSpace::BoundaryNodes, 0, rule);
  for (std::size_t j = 0; j < nodes.size(); ++j) k.v[j] = acc[j].value();
  return k;
}

struct WeightSums {
  double denominator = 0;
  cplx numerator = 0;
};

/// sum W(phi_z(x)) f(x) and sum W(phi_z(x)) on the disk.
inline WeightSums radial_weight_sums(const Configuration& conf, const Point& z, const RadialWeight& W,
                                     const TargetFunction& f) {
  if (conf.model.kind() != ModelKind::PoincareDisk) throw UsageError("radial weights are defined on the disk");
  detail::check_point(conf.model, z);
  CompensatedSum<double> den;
  CompensatedSum<cplx> num;
  cplx zc = z.z();
  for (const auto& x : conf.points) {
    cplx y = (zc - x.z()) / (1.0 - std::conj(zc) * x.z());
    double w = W(std::abs(y));
    if (w == 0) continue;
    den.add(w);
    num.add(w * f(conf.model, x));
  }
  return {den.value(), num.value()};
}

/// sum W_s(phi_z(x)) f(x) / sum W_s(phi_z(x)).
inline cplx radial_weight_ratio(const Configuration& conf, const Point& z, double s, const TargetFunction& f) {
  if (!(s > 1 && s < 2)) throw UsageError("radial_weight_ratio needs 1 < s < 2");
  WeightSums ws = radial_weight_sums(conf, z, RadialWeight::ws(s), f);
  if (!(ws.denominator > 0)) throw DegenerateError("no point of the configuration lies in the weight support");
  return ws.numerator / ws.denominator;
}

struct TraceRow {
  double s = 0;
  double sigma = 0;
  cplx numerator = 0;
  cplx ratio = 0;
  std::optional<cplx> ratio_normalized;
  cplx reference = 0;
  double abs_err = 0;
  double tail_fraction = 0;
  bool feasible = true;
};

inline constexpr double kTailThreshold = 0.02;

/// One row per s (sorted decreasing); the reference value f(z) uses the same
/// evaluation rule as the sample.
inline std::vector<TraceRow> run_trace(const Configuration& conf, const Point& z, std::vector<double> s_grid,
                                       const TargetFunction& f, std::optional<double> lambda = std::nullopt) {
  std::sort(s_grid.begin(), s_grid.end(), std::greater<>());
  std::vector<double> d = distances(conf, z);
  std::vector<cplx> fx(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) fx[i] = f(conf.model, conf.points[i]);
  cplx ref = f(conf.model, z);
  if (!lambda && conf.meta.lambda) lambda = conf.meta.lambda;
  double R = conf.truncation_radius();
  std::vector<TraceRow> rows;
  for (double s : s_grid) {
    if (!(s > conf.model.entropy())) throw DomainError("trace grid needs s > h");
    CompensatedSum<double> sg;
    CompensatedSum<cplx> num;
    for (std::size_t i = 0; i < d.size(); ++i) {
      double w = std::exp(-s * d[i]);
      sg.add(w);
      num.add(w * fx[i]);
    }
    TraceRow r;
    r.s = s;
    r.sigma = sg.value();
    r.numerator = num.value();
    if (!(r.sigma > 0)) throw DegenerateError("sigma vanishes: empty configuration");
    r.ratio = r.numerator / r.sigma;
    if (lambda) r.ratio_normalized = r.numerator / sigma_bar(conf.model, *lambda, z, s);
    r.reference = ref;
    r.abs_err = std::abs(r.ratio - ref);
    r.tail_fraction = R > detail::dist_unchecked(origin(conf.model), z) ? tail_fraction(conf.model, z, s, R) : 1.0;
    r.feasible = r.tail_fraction <= kTailThreshold;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace psrecon

#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "reconstruct.hpp"

namespace psrecon {

/// Boundary directions of the points of a configuration with weights
/// exp(-s d(y, x)); the Euclidean moduli are kept alongside.
struct WeightedBoundarySample {
  Model model = Model::disk();
  std::vector<BoundaryPoint> directions;
  std::vector<double> moduli;
  std::vector<double> weights;
  double total = 0;
  bool normalized = false;
  Point y;
  double s = 0;
  std::uint64_t source_seed = 0;
  int origin_atoms = 0;
};

inline WeightedBoundarySample ps_empirical(const Configuration& conf, const Point& y, double s) {
  if (!(s > conf.model.entropy())) throw DomainError("ps_empirical needs s > h");
  if (conf.points.empty()) throw DegenerateError("ps_empirical on an empty configuration");
  WeightedBoundarySample w;
  w.model = conf.model;
  w.y = y;
  w.s = s;
  w.source_seed = conf.meta.seed;
  std::vector<double> d = distances(conf, y);
  CompensatedSum<double> tot;
  for (std::size_t i = 0; i < conf.size(); ++i) {
    const Point& x = conf.points[i];
    BoundaryPoint b;
    b.kind = x.kind;
    b.n = x.n;
    double r = x.norm();
    if (r == 0) {
      b.c[0] = 1;
      ++w.origin_atoms;
    } else {
      for (int k = 0; k < x.n; ++k) b.c[k] = x.c[k] / r;
    }
    double wt = std::exp(-s * d[i]);
    w.directions.push_back(b);
    w.moduli.push_back(r);
    w.weights.push_back(wt);
    tot.add(wt);
  }
  w.total = tot.value();
  return w;
}

inline WeightedBoundarySample normalize(WeightedBoundarySample w) {
  if (!(w.total > 0)) throw DegenerateError("cannot normalize a zero-mass sample");
  for (double& x : w.weights) x /= w.total;
  w.total = 1;
  w.normalized = true;
  return w;
}

/// Test functions for the Fourier coefficients: e^{-in theta} at the radial
/// projection, or its harmonic extension conj(x)^n at the interior atom.
enum class Extension { Radial, Harmonic };

/// c_n = sum w_i e_n(x_i) / sum w_i for 0 <= n <= n_max (disk).
inline std::vector<cplx> fourier_coeffs(const WeightedBoundarySample& w, int n_max,
                                        Extension ext = Extension::Radial) {
  if (w.model.kind() != ModelKind::PoincareDisk) throw UsageError("fourier_coeffs is disk-only; use sphere_moments");
  std::vector<CompensatedSum<cplx>> acc(n_max + 1);
  CompensatedSum<double> tot;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    cplx e = std::conj(w.directions[i].z());
    if (ext == Extension::Harmonic) e *= w.moduli[i];
    cplx p = w.weights[i];
    tot.add(w.weights[i]);
    for (int n = 0; n <= n_max; ++n) {
      acc[n].add(p);
      p *= e;
    }
  }
  double t = tot.value();
  if (!(t > 0)) throw DegenerateError("zero-mass sample");
  std::vector<cplx> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) out[n] = acc[n].value() / t;
  out[0] = 1;
  return out;
}

/// Fourier coefficients of harmonic measure from y: conj(y)^n.
inline std::vector<cplx> harmonic_measure_coeffs(const Point& y, int n_max) {
  detail::check_point(Model::disk(), y);
  std::vector<cplx> out(n_max + 1);
  cplx p = 1, yb = std::conj(y.z());
  for (int n = 0; n <= n_max; ++n, p *= yb) out[n] = p;
  return out;
}

/// Coefficients of the boundary projection of mu restricted to B(o, r),
/// normalized, by quadrature (disk).
inline std::vector<cplx> ball_average_coeffs(const Model& m, double r, int n_max) {
  if (m.kind() != ModelKind::PoincareDisk) throw UsageError("ball_average_coeffs is disk-only");
  if (!(r > 0)) throw UsageError("ball_average_coeffs needs r > 0");
  const int na = std::max(64, 4 * (n_max + 1));
  const double vol = ball_volume(m, r);
  std::vector<cplx> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    CompensatedSum<cplx> ang;
    for (int k = 0; k < na; ++k) ang.add(std::polar(1.0, -2 * kPi * n * k / na));
    cplx angular = ang.value() / double(na);
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = 1e-14;
    double radial = adaptive_gl([&](double rho) { return sphere_area(m, rho); }, 0, r, o).value;
    out[n] = angular * radial / vol;
  }
  return out;
}

/// Empirical coefficients from uniform weights on the points of B(o, r).
inline std::vector<cplx> ball_route_coeffs(const Configuration& conf, double r, int n_max,
                                           Extension ext = Extension::Radial) {
  WeightedBoundarySample w = ps_empirical(conf, origin(conf.model), conf.model.entropy() + 1);
  std::vector<double> d = distances(conf, origin(conf.model));
  for (std::size_t i = 0; i < d.size(); ++i) w.weights[i] = d[i] <= r ? 1.0 : 0.0;
  return fourier_coeffs(w, n_max, ext);
}

struct SphereMoments {
  std::vector<double> first;
  std::vector<double> second;  // row-major n x n
};

/// First and second moments of the normalized directions.
inline SphereMoments sphere_moments(const WeightedBoundarySample& w) {
  const int n = w.model.real_dim();
  SphereMoments m{std::vector<double>(n), std::vector<double>(n * n)};
  double tot = 0;
  for (double x : w.weights) tot += x;
  if (!(tot > 0)) throw DegenerateError("zero-mass sample");
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const auto& d = w.directions[i];
    double wt = w.weights[i] / tot;
    for (int a = 0; a < n; ++a) {
      m.first[a] += wt * d.c[a];
      for (int b = 0; b < n; ++b) m.second[a * n + b] += wt * d.c[a] * d.c[b];
    }
  }
  return m;
}

/// Moments of the conformal density P(y, .) sigma, by the boundary rule.
inline SphereMoments conformal_moments(const Model& m, const Point& y, const QuadratureRule& rule) {
  detail::check_point(m, y);
  WeightedBoundarySample w;
  w.model = m;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    w.directions.push_back(rule.nodes()[i]);
    w.moduli.push_back(1);
    w.weights.push_back(rule.weights()[i] * detail::poisson_kernel_unchecked(m, y, rule.nodes()[i]));
  }
  return sphere_moments(w);
}

struct ExponentFit {
  double slope = 0;
  double stderr_slope = 0;
  double residual = 0;
  double window_lo = 0;
  double window_hi = 0;
};

/// Least-squares slope of log #(X in B(o, r)) against r on unit-spaced knots
/// of the window (default [R/3, R - 1]).
inline ExponentFit critical_exponent(const Configuration& conf, std::optional<std::pair<double, double>> window = {}) {
  double R = conf.truncation_radius();
  if (!window) {
    if (conf.size() < 100 || R < 6)
      throw DegenerateError("critical_exponent needs at least 100 points and truncation radius >= 6");
    window = std::pair{R / 3, R - 1};
  }
  auto [lo, hi] = *window;
  if (!(hi - lo >= 1)) throw DegenerateError("critical_exponent window shorter than 1");
  std::vector<double> d = distances(conf, origin(conf.model));
  std::sort(d.begin(), d.end());
  std::vector<double> xs, ys;
  for (double r = lo; r <= hi + 1e-12; r += 1) {
    double cnt = double(std::upper_bound(d.begin(), d.end(), r) - d.begin());
    if (cnt < 1) throw DegenerateError("critical_exponent: empty ball at r = " + fmt17(r));
    xs.push_back(r);
    ys.push_back(std::log(cnt));
  }
  const double n = double(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n, my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit f;
  f.slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - my - f.slope * (xs[i] - mx);
    rss += e * e;
  }
  f.residual = std::sqrt(rss / n);
  f.stderr_slope = xs.size() > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0;
  f.window_lo = lo;
  f.window_hi = hi;
  return f;
}

struct ShellRow {
  int k = 0;
  double increment = 0;
  double partial = 0;
};

/// Partial sums of sum exp(-h d(o, x)) over unit shells about o.
inline std::vector<ShellRow> divergence_diagnostic(const Configuration& conf, double h) {
  std::size_t len = static_cast<std::size_t>(std::ceil(conf.truncation_radius()));
  std::vector<double> d = distances(conf, origin(conf.model));
  for (double x : d) len = std::max(len, static_cast<std::size_t>(x) + 1);
  std::vector<CompensatedSum<double>> acc(len);
  for (double x : d) acc[static_cast<std::size_t>(x)].add(std::exp(-h * x));
  std::vector<ShellRow> rows;
  double run = 0;
  for (std::size_t k = 0; k < len; ++k) {
    double inc = acc[k].value();
    run += inc;
    rows.push_back({int(k), inc, run});
  }
  return rows;
}

}  // namespace psrecon

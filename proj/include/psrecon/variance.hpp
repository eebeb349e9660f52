#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "processes.hpp"
#include "reconstruct.hpp"
#include "weights.hpp"

namespace psrecon {

struct VarianceQuad {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  long max_evals = 1L << 20;
};

namespace detail {

/// Integral of (W(u) - W(v))^2 k(u, v) over the unit square for a kernel
/// symmetric in (u, v), where u = 1 - |eta|^2 and v = 1 - |xi|^2. Cells with
/// both points outside the support vanish and are skipped.
template <class K>
double weight_double_integral(const RadialWeight& W, K&& k, const VarianceQuad& q) {
  if (W.is_constant()) return 0;
  double umin = 1 - W.rho_max() * W.rho_max();
  std::vector<double> breaks = W.u_breaks();
  QuadOptions inner;
  inner.abs_tol = q.abs_tol;
  inner.rel_tol = q.rel_tol * 0.1;
  inner.max_evals = q.max_evals;
  QuadOptions outer = inner;
  outer.rel_tol = q.rel_tol;
  long evals = 0;
  auto row = [&](double u) {
    double wu = W.of_u(u);
    std::vector<double> b;
    for (double x : breaks)
      if (x < u) b.push_back(x);
    QuadResult r = adaptive_gl_breaks(
        [&](double v) {
          double d = wu - W.of_u(v);
          return d == 0 ? 0.0 : d * d * k(u, v);
        },
        0, u, b, inner);
    evals += r.evals;
    if (evals > q.max_evals) throw NumericalError("variance quadrature exceeded its evaluation cap", r.error);
    return r.value;
  };
  std::vector<double> ob;
  for (double x : breaks)
    if (x > umin) ob.push_back(x);
  QuadResult r = adaptive_gl_breaks(row, umin, 1, ob, outer);
  return 2 * r.value;
}

/// Average over the relative angle of f(theta), by trapezoid doubling.
template <class F>
auto periodic_average(F&& f, double rel_tol = 1e-15, int max_nodes = 1 << 16) {
  using T = decltype(f(0.0));
  auto rule = [&](int n) {
    CompensatedSum<T> s;
    for (int k = 0; k < n; ++k) s.add(f(2 * kPi * k / n));
    return s.value() / double(n);
  };
  int n = 32;
  T prev = rule(n);
  for (n *= 2; n <= max_nodes; n *= 2) {
    T cur = rule(n);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
    prev = cur;
  }
  throw NumericalError("angular average did not converge", std::abs(prev));
}

inline cplx szego(cplx z, cplx w) { return 1.0 / (1.0 - z * std::conj(w)); }
inline cplx bergman(cplx z, cplx w) {
  cplx q = 1.0 - z * std::conj(w);
  return 1.0 / (kPi * q * q);
}

}  // namespace detail

/// Variance of the H2-valued statistic sum W(phi_z(x)) S_x under the GAF zero
/// process, reduced to a double integral over the two moduli.
inline double var_hardy_closed(const RadialWeight& W, const Point& z, const VarianceQuad& q = {}) {
  detail::check_point(Model::disk(), z);
  double a = z.norm2();
  double v = detail::weight_double_integral(
      W,
      [&](double u, double w) {
        double b = (1 - u) * (1 - w);
        double t = a * b;
        double g = u + w - u * w;
        double g2 = g * g;
        return (1 + 2 * b + 2 * t + b * t) / (g2 * g2);
      },
      q);
  return v / (2 * (1 - a));
}

/// Variance of sum g(x) S_x for a radial real g, from the angular average of
/// the kernel S(z, w)|K(z, w)|^2 computed by quadrature.
inline double var_hardy_general(const RadialWeight& g, const VarianceQuad& q = {}) {
  return 0.5 * kPi * kPi *
         detail::weight_double_integral(
             g,
             [&](double u, double v) {
               double r1 = std::sqrt(1 - u), r2 = std::sqrt(1 - v);
               return detail::periodic_average(
                   [&](double th) {
                     cplx a(r1, 0), b = std::polar(r2, th);
                     return (detail::szego(a, b) * std::norm(detail::bergman(a, b))).real();
                   },
                   1e-14);
             },
             q);
}

struct ProductRule2D {
  int radial_nodes = 16;
  int angular_nodes = 48;
};

/// Variance of sum g(x) S_x for a real g supported in |x| <= rho_g, by a
/// product rule over both points (four-dimensional).
inline double var_hardy_general(const std::function<cplx(cplx)>& g, double rho_g, const ProductRule2D& pr = {}) {
  if (!(rho_g > 0 && rho_g < 1)) throw UsageError("support radius must lie in (0, 1)");
  const GaussRule& gl = gauss_rule(pr.radial_nodes);
  double ug = 1 - rho_g * rho_g;
  struct Node {
    cplx x;
    double w;
    double g;
  };
  std::vector<Node> nodes;
  for (auto [lo, hi] : {std::pair{0.0, ug}, std::pair{ug, 1.0}}) {
    for (int i = 0; i < pr.radial_nodes; ++i) {
      double u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i];
      double wu = 0.5 * (hi - lo) * gl.w[i] * kPi / pr.angular_nodes;
      double r = std::sqrt(1 - u);
      for (int k = 0; k < pr.angular_nodes; ++k) {
        cplx x = std::polar(r, 2 * kPi * (k + 0.5 * (i % 2)) / pr.angular_nodes);
        cplx gv = r <= rho_g ? g(x) : cplx(0);
        if (gv.imag() != 0) throw UsageError("var_hardy_general needs a real-valued g");
        nodes.push_back({x, wu, gv.real()});
      }
    }
  }
  CompensatedSum<double> acc;
  for (const auto& a : nodes) {
    for (const auto& b : nodes) {
      double d = a.g - b.g;
      if (d == 0) continue;
      acc.add(a.w * b.w * d * d * (detail::szego(a.x, b.x) * std::norm(detail::bergman(a.x, b.x))).real());
    }
  }
  return 0.5 * acc.value();
}

/// Variance of the A2-valued statistic sum W(phi_{z_o}(x)) K^x under the GAF
/// zero process.
inline double var_bergman_closed(const RadialWeight& W, const Point& zo, const VarianceQuad& q = {}) {
  detail::check_point(Model::disk(), zo);
  double a = zo.norm2();
  double v = detail::weight_double_integral(
      W,
      [&](double u, double w) {
        double b = (1 - u) * (1 - w);
        double t = a * b;
        double g = u + w - u * w;
        double g4 = g * g * g * g;
        return ((1 + 8 * t + 3 * t * t) / g4 + 4 * b * (1 + 4 * t + t * t) / (g4 * g)) / kPi;
      },
      q);
  return v / (2 * (1 - a) * (1 - a));
}

struct Sandwich {
  double lower = 0;
  double value = 0;
  double upper = 0;
};

/// var_bergman_closed with the bounds from the simplified kernel (1-|eta xi|^2)^-5
/// times 1/pi^3 and 36/pi^3.
inline Sandwich bergman_sandwich(const RadialWeight& W, const Point& zo, const VarianceQuad& q = {}) {
  double a = zo.norm2();
  double h = detail::weight_double_integral(
      W,
      [&](double u, double w) {
        double g = u + w - u * w;
        return 1 / (kPi * g * g * g * g * g);
      },
      q);
  double pre = 1 / (2 * (1 - a) * (1 - a));
  return {pre * h, var_bergman_closed(W, zo, q), 36 * pre * h};
}

/// E sum W(phi_{z_o}(x)) for the GAF zeros: integral of W(u)/u^2 over (0, 1).
inline double expected_weight_sum(const RadialWeight& W, const VarianceQuad& q = {}) {
  if (W.is_constant()) throw UsageError("constant weight has infinite expected sum");
  if (W.kind() == RadialWeight::Kind::Ws) return expected_ws_sum(W.parameter());
  QuadOptions o;
  o.rel_tol = q.rel_tol;
  o.abs_tol = q.abs_tol;
  double umin = 1 - W.rho_max() * W.rho_max();
  return adaptive_gl_breaks([&](double u) { return W.of_u(u) / (u * u); }, umin, 1, W.u_breaks(), o).value;
}

inline constexpr double kFailureBound = kPi * kPi / 64;

/// var_bergman_closed / (E sum W)^2; bounded below by pi^2/64.
inline double failure_ratio(const RadialWeight& W, const Point& zo, const VarianceQuad& q = {}) {
  if (W.is_constant()) throw UsageError("failure_ratio needs a compactly supported weight");
  double e = expected_weight_sum(W, q);
  if (!(e > 0)) throw UsageError("failure_ratio needs a nonzero weight");
  return var_bergman_closed(W, zo, q) / (e * e);
}

/// var_hardy_closed(W_s, z) / (E sum W_s)^2.
inline double cor53_ratio(double s, const Point& z, const VarianceQuad& q = {}) {
  if (!(s > 1 && s < 2)) throw UsageError("cor53_ratio needs 1 < s < 2");
  double e = expected_ws_sum(s);
  return var_hardy_closed(RadialWeight::ws(s), z, q) / (e * e);
}

enum class Identity { I2, I3, I4, I9, I10, I11, LemRepHardy, LemRep };

inline std::string identity_name(Identity k) {
  switch (k) {
    case Identity::I2: return "I2";
    case Identity::I3: return "I3";
    case Identity::I4: return "I4";
    case Identity::I9: return "I9";
    case Identity::I10: return "I10";
    case Identity::I11: return "I11";
    case Identity::LemRepHardy: return "lem-rep-hardy";
    default: return "lem-rep";
  }
}

/// Arguments of an angular identity: (z, w) for I2/I9/lem-rep*, (eta, xi, z_o)
/// for the weighted ones.
struct IdentityParams {
  cplx a = 0;
  cplx b = 0;
  cplx zo = 0;
};

struct IdentityValue {
  cplx lhs = 0;
  cplx rhs = 0;
  double rel_error() const { return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300); }
};

namespace detail {

inline cplx l_s(cplx z, cplx w) { return szego(z, w) * std::norm(bergman(z, w)); }
inline cplx l_k(cplx z, cplx w) { return bergman(z, w) * std::norm(bergman(z, w)); }

/// Integral over the disk against dV by radial Gauss–Legendre and angular trapezoid.
template <class F>
cplx disk_integral(F&& f) {
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  auto part = [&](auto proj) {
    return adaptive_gl(
               [&](double r) {
                 return r * 2 * kPi * proj(periodic_average([&](double th) { return f(std::polar(r, th)); }, 1e-15));
               },
               0, 1, o)
        .value;
  };
  return {part([](cplx c) { return c.real(); }), part([](cplx c) { return c.imag(); })};
}

}  // namespace detail

/// Direct quadrature (lhs) and residue closed form (rhs) of an angular identity.
inline IdentityValue identity_angular(Identity kind, const IdentityParams& p) {
  for (cplx c : {p.a, p.b, p.zo})
    if (!(std::abs(c) < 1)) throw DomainError("identity parameters must lie inside the disk");
  using detail::bergman;
  using detail::l_k;
  using detail::l_s;
  using detail::periodic_average;
  IdentityValue out;
  const double pi2 = kPi * kPi, pi3 = pi2 * kPi;
  const cplx eta = p.a, xi = p.b, zo = p.zo;
  switch (kind) {
    case Identity::I2: {
      out.lhs = periodic_average([&](double th) { return l_s(p.a, p.b * std::polar(1.0, -th)); });
      double a = std::norm(p.a * p.b), q = 1 - a;
      out.rhs = (1 / (q * q * q) + 3 * a / (q * q * q * q)) / pi2;
      break;
    }
    case Identity::I9: {
      out.lhs = periodic_average([&](double th) { return l_k(p.a, p.b * std::polar(1.0, -th)); });
      double a = std::norm(p.a * p.b), q = 1 - a;
      out.rhs = (1 / (q * q * q * q) + 4 * a / (q * q * q * q * q)) / pi3;
      break;
    }
    case Identity::I4: {
      out.lhs = periodic_average([&](double th) {
        cplx e = std::polar(1.0, th);
        return (1.0 - std::conj(zo) * eta * e) * l_s(eta * e, xi);
      });
      double b = std::norm(eta * xi), q = 1 - b;
      cplx c = std::conj(zo) * std::norm(eta) * xi;
      out.rhs = ((1.0 - 2.0 * c) / (q * q * q) + 3.0 * (1.0 - c) * b / (q * q * q * q)) / pi2;
      break;
    }
    case Identity::I11: {
      out.lhs = periodic_average([&](double th) {
        cplx e = std::polar(1.0, th);
        cplx f = 1.0 - std::conj(zo) * eta * e;
        return f * f * l_k(eta * e, xi);
      });
      double b = std::norm(eta * xi), q = 1 - b;
      cplx c = std::conj(zo) * std::norm(eta) * xi;
      out.rhs = ((1.0 - c) * (1.0 - 3.0 * c) / (q * q * q * q) + 4.0 * b * (1.0 - c) * (1.0 - c) / (q * q * q * q * q)) / pi3;
      break;
    }
    case Identity::I3: {
      out.lhs = periodic_average([&](double t2) {
        return periodic_average([&](double t1) {
          cplx e1 = std::polar(1.0, t1), e2 = std::polar(1.0, t2);
          return (1.0 - std::conj(zo) * eta * e1) * (1.0 - zo * std::conj(xi) * e2) * l_s(eta * e1, xi * std::conj(e2));
        });
      });
      double b = std::norm(eta * xi), t = std::norm(zo) * b, q = 1 - b;
      out.rhs = (1 + 2 * b + 2 * t + b * t) / (pi2 * q * q * q * q);
      break;
    }
    case Identity::I10: {
      out.lhs = periodic_average([&](double t2) {
        return periodic_average([&](double t1) {
          cplx e1 = std::polar(1.0, t1), e2 = std::polar(1.0, t2);
          cplx f1 = 1.0 - std::conj(zo) * eta * e1, f2 = 1.0 - zo * std::conj(xi) * std::conj(e2);
          return f1 * f1 * f2 * f2 * l_k(eta * e1, xi * e2);
        });
      });
      double b = std::norm(eta * xi), t = std::norm(zo) * b, q = 1 - b, q4 = q * q * q * q;
      out.rhs = ((1 + 8 * t + 3 * t * t) / q4 + 4 * b * (1 + 4 * t + t * t) / (q4 * q)) / pi3;
      break;
    }
    case Identity::LemRepHardy: {
      out.lhs = detail::disk_integral([&](cplx w) { return l_s(p.a, w); });
      double q = 1 - std::norm(p.a);
      out.rhs = 1 / (kPi * q * q * q);
      break;
    }
    case Identity::LemRep: {
      out.lhs = detail::disk_integral([&](cplx w) { return l_k(p.a, w); });
      out.rhs = bergman(p.a, p.a) * bergman(p.a, p.a);
      break;
    }
  }
  return out;
}

enum class ValueSpace { Scalar, Hardy, Boundary, Bergman };

/// A linear statistic sum weight(x) v(x) with v(x) = 1, S_x, P_x or K^x.
struct StatisticSpec {
  ValueSpace space = ValueSpace::Scalar;
  std::function<cplx(const Point&)> weight;
  int n_max = 128;
  std::string label;
};

/// Statistic with weight W(|phi_z(x)|).
inline StatisticSpec radial_statistic(const RadialWeight& W, const Point& z, ValueSpace space, int n_max = 128) {
  detail::check_point(Model::disk(), z);
  cplx zc = z.z();
  StatisticSpec st;
  st.space = space;
  st.n_max = n_max;
  st.label = W.describe();
  st.weight = [W, zc](const Point& x) {
    cplx y = (zc - x.z()) / (1.0 - std::conj(zc) * x.z());
    return cplx(W(std::abs(y)));
  };
  return st;
}

/// Scalar statistic sum f(x).
inline StatisticSpec scalar_statistic(std::function<cplx(const Point&)> f, std::string label = "f") {
  StatisticSpec st;
  st.space = ValueSpace::Scalar;
  st.weight = std::move(f);
  st.label = std::move(label);
  return st;
}

/// Value of a statistic on one configuration.
inline std::vector<cplx> evaluate_statistic(const Configuration& conf, const StatisticSpec& st) {
  if (st.space == ValueSpace::Scalar) {
    CompensatedSum<cplx> s;
    for (const auto& x : conf.points) s.add(st.weight(x));
    return {s.value()};
  }
  if (conf.model.kind() != ModelKind::PoincareDisk) throw UsageError("vector statistics are disk-only");
  KernelSpace ks = st.space == ValueSpace::Hardy     ? KernelSpace::Hardy
                   : st.space == ValueSpace::Bergman ? KernelSpace::Bergman
                                                     : KernelSpace::BoundaryFourier;
  KernelVector k = KernelVector::zeros(conf.model, ks, st.n_max);
  for (const auto& x : conf.points) {
    cplx w = st.weight(x);
    if (w == 0.0) continue;
    if (w.imag() == 0) {
      detail::accumulate_kernel(k, x, w.real());
    } else {
      KernelVector one = KernelVector::zeros(conf.model, ks, st.n_max);
      detail::accumulate_kernel(one, x, 1.0);
      for (std::size_t i = 0; i < k.v.size(); ++i) k.v[i] += w * one.v[i];
    }
  }
  return k.v;
}

struct VarianceReport {
  std::optional<double> closed_form;
  double mc_estimate = 0;
  double mc_stderr = 0;
  long n_reps = 0;
  bool pass = false;

  /// Compares against a closed form: within 3 SE and 5% relative.
  VarianceReport& compare(double closed, double sigmas = 3, double rel = 0.05) {
    closed_form = closed;
    double gap = std::abs(closed - mc_estimate);
    bool within_se = gap <= sigmas * mc_stderr;
    bool within_rel = closed == 0 ? mc_estimate == 0 : gap <= rel * std::abs(closed);
    pass = (within_se || gap == 0) && within_rel;
    return *this;
  }
};

/// Unbiased sample variance of the vectors (E|V - EV|^2) with a leave-one-out
/// jackknife standard error.
inline std::pair<double, double> vector_variance(const std::vector<std::vector<cplx>>& vals) {
  const std::size_t n = vals.size();
  if (n < 2) throw UsageError("variance needs at least two replications");
  const std::size_t dim = vals[0].size();
  std::vector<cplx> mean(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    CompensatedSum<cplx> s;
    for (const auto& v : vals) s.add(v[d]);
    mean[d] = s.value() / double(n);
  }
  std::vector<double> sq(n);
  std::vector<std::vector<cplx>> cen(n, std::vector<cplx>(dim));
  CompensatedSum<double> s2;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      cen[i][d] = vals[i][d] - mean[d];
      a += std::norm(cen[i][d]);
    }
    sq[i] = a;
    s2.add(a);
  }
  const double S2 = s2.value();
  const double var = S2 / double(n - 1);
  if (n < 3) return {var, 0.0};
  std::vector<double> loo(n);
  const double m = double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Removing point i shifts the centered mean to -c_i/(n-1).
    double s2i = S2 - sq[i] - sq[i] / m;
    loo[i] = s2i / (m - 1);
  }
  double lbar = std::accumulate(loo.begin(), loo.end(), 0.0) / double(n);
  CompensatedSum<double> jk;
  for (double l : loo) jk.add((l - lbar) * (l - lbar));
  return {var, std::sqrt(jk.value() * (double(n) - 1) / double(n))};
}

/// Monte Carlo variance of a statistic over replications of a sampler.
/// Replication indices are sorted first, so the report does not depend on
/// their order.
inline VarianceReport mc_variance_indices(const SamplerSpec& spec, const StatisticSpec& st,
                                          std::vector<std::uint64_t> indices, unsigned threads = 0) {
  spec.validate();
  if (indices.size() < 2) throw UsageError("mc_variance needs at least two replications");
  std::sort(indices.begin(), indices.end());
  auto vals = parallel_map(
      indices.size(),
      [&](std::size_t i) {
        try {
          return evaluate_statistic(sample(spec, indices[i]), st);
        } catch (const NumericalError& e) {
          throw NumericalError(std::string(e.what()) + " (replication " + std::to_string(indices[i]) + ")",
                               e.achieved());
        }
      },
      threads);
  auto [var, se] = vector_variance(vals);
  VarianceReport r;
  r.mc_estimate = var;
  r.mc_stderr = se;
  r.n_reps = static_cast<long>(indices.size());
  r.pass = true;
  return r;
}

inline VarianceReport mc_variance(const SamplerSpec& spec, const StatisticSpec& st, long n_reps, std::uint64_t seed,
                                  unsigned threads = 0) {
  if (n_reps < 100) throw UsageError("mc_variance needs n_reps >= 100");
  SamplerSpec sp = spec;
  sp.seed = seed;
  std::vector<std::uint64_t> idx(n_reps);
  std::iota(idx.begin(), idx.end(), 0);
  return mc_variance_indices(sp, st, std::move(idx), threads);
}

/// Euclidean radius reached by phi_z of the support of W.
inline double support_image_radius(const RadialWeight& W, const Point& z) {
  double a = z.norm(), r = W.rho_max();
  return (a + r) / (1 + a * r);
}

struct BoundReport {
  double variance = 0;
  double second_moment = 0;
  double ratio = 0;
  double ratio_stderr = 0;
  double constant = 1;
  long n_reps = 0;
  bool pass = false;
};

/// Var(sum f) <= C E(sum |f|^2), C = 1 for nonnegative f and 16 otherwise,
/// with 3 SE slack on the empirical ratio.
inline BoundReport variance_bound_check(const SamplerSpec& spec, const std::function<cplx(const Point&)>& f,
                                        bool nonnegative, long n_reps, std::uint64_t seed, unsigned threads = 0) {
  SamplerSpec sp = spec;
  sp.seed = seed;
  sp.validate();
  if (n_reps < 3) throw UsageError("variance_bound_check needs at least three replications");
  auto vals = parallel_map(
      static_cast<std::size_t>(n_reps),
      [&](std::size_t i) {
        Configuration c = sample(sp, i);
        CompensatedSum<cplx> s;
        CompensatedSum<double> q;
        for (const auto& x : c.points) {
          cplx v = f(x);
          s.add(v);
          q.add(std::norm(v));
        }
        return std::pair{s.value(), q.value()};
      },
      threads);
  const double n = double(n_reps);
  auto stats = [&](std::size_t skip) {
    CompensatedSum<cplx> m1;
    CompensatedSum<double> m2;
    double k = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i == skip) continue;
      m1.add(vals[i].first);
      m2.add(vals[i].second);
      k += 1;
    }
    cplx mean = m1.value() / k;
    CompensatedSum<double> v;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (i != skip) v.add(std::norm(vals[i].first - mean));
    return std::pair{v.value() / (k - 1), m2.value() / k};
  };
  BoundReport r;
  r.n_reps = n_reps;
  r.constant = nonnegative ? 1 : 16;
  auto [var, mom] = stats(vals.size());
  r.variance = var;
  r.second_moment = mom;
  if (mom == 0) {
    r.pass = var == 0;
    return r;
  }
  r.ratio = var / mom;
  std::vector<double> loo(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    auto [vi, mi] = stats(i);
    loo[i] = mi > 0 ? vi / mi : 0;
  }
  double lbar = std::accumulate(loo.begin(), loo.end(), 0.0) / n;
  double jk = 0;
  for (double l : loo) jk += (l - lbar) * (l - lbar);
  r.ratio_stderr = std::sqrt(jk * (n - 1) / n);
  r.pass = r.ratio <= r.constant + 3 * r.ratio_stderr;
  return r;
}

struct ScanRow {
  double s = 0;
  double variance = 0;
  double stderr_v = 0;
  double scaled = 0;
};

/// MC variance of the kernel statistic over an s grid, on common samples, and
/// the scaled values (1 - exp(-(s - h))) Var.
inline std::vector<ScanRow> up_exp_scan(const SamplerSpec& spec, const Point& z, std::vector<double> s_grid, long n_reps,
                                        std::uint64_t seed, int n_max = 64, unsigned threads = 0) {
  SamplerSpec sp = spec;
  sp.seed = seed;
  sp.validate();
  if (sp.model.kind() != ModelKind::PoincareDisk) throw UsageError("up_exp_scan uses the Fourier kernel statistic");
  std::sort(s_grid.begin(), s_grid.end(), std::greater<>());
  auto per_rep = parallel_map(
      static_cast<std::size_t>(n_reps),
      [&](std::size_t i) {
        Configuration c = sample(sp, i);
        std::vector<std::vector<cplx>> out;
        for (double s : s_grid) out.push_back(kernel_statistic(c, z, s, n_max).v);
        return out;
      },
      threads);
  std::vector<ScanRow> rows;
  double h = sp.model.entropy();
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    std::vector<std::vector<cplx>> vals;
    for (auto& r : per_rep) vals.push_back(std::move(r[j]));
    auto [var, se] = vector_variance(vals);
    rows.push_back({s_grid[j], var, se, (1 - std::exp(-(s_grid[j] - h))) * var});
  }
  return rows;
}

/// max/min of the scaled scan values.
inline double scan_spread(const std::vector<ScanRow>& rows) {
  double lo = INFINITY, hi = 0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.scaled);
    hi = std::max(hi, r.scaled);
  }
  return rows.empty() ? 1 : hi / lo;
}

}  // namespace psrecon

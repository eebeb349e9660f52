#pragma once

#include <memory>
#include <random>
#include <variant>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace psrecon {

/// Nodes and positive weights for the normalized surface measure on the boundary.
class QuadratureRule {
 public:
  /// Equispaced rule on the circle; exact for e^{ik theta}, 0 < |k| < n.
  static QuadratureRule circle(int n) {
    if (n < 1) throw UsageError("circle rule needs at least one node");
    QuadratureRule q(Model::disk());
    q.circle_ = true;
    for (int k = 0; k < n; ++k) {
      double th = 2 * kPi * k / n;
      BoundaryPoint b;
      b.kind = ModelKind::PoincareDisk;
      b.n = 2;
      b.c[0] = std::cos(th);
      b.c[1] = std::sin(th);
      q.nodes_.push_back(b);
    }
    q.weights_.assign(n, 1.0 / n);
    return q;
  }

  /// Equal-weight Monte Carlo nodes, uniform on the unit sphere.
  static QuadratureRule sphere_mc(const Model& m, int n, std::uint64_t seed) {
    if (n < 1) throw UsageError("sphere rule needs at least one node");
    QuadratureRule q(m);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> g;
    for (int k = 0; k < n; ++k) q.nodes_.push_back(random_direction(m, rng, g));
    q.weights_.assign(n, 1.0 / n);
    return q;
  }

  /// Circle rule on the disk, Monte Carlo rule elsewhere.
  static QuadratureRule standard(const Model& m, int n, std::uint64_t seed) {
    return m.kind() == ModelKind::PoincareDisk ? circle(n) : sphere_mc(m, n, seed);
  }

  template <class G>
  static BoundaryPoint random_direction(const Model& m, Rng& rng, G& gauss) {
    BoundaryPoint b;
    b.kind = m.kind();
    b.n = m.real_dim();
    double s = 0;
    while (s < 1e-200) {
      s = 0;
      for (int i = 0; i < b.n; ++i) {
        b.c[i] = gauss(rng);
        s += b.c[i] * b.c[i];
      }
    }
    double inv = 1 / std::sqrt(s);
    for (int i = 0; i < b.n; ++i) b.c[i] *= inv;
    return b;
  }

  const Model& model() const { return model_; }
  const std::vector<BoundaryPoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  bool is_circle() const { return circle_; }

 private:
  explicit QuadratureRule(Model m) : model_(m) {}
  Model model_;
  std::vector<BoundaryPoint> nodes_;
  std::vector<double> weights_;
  bool circle_ = false;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

/// Square-integrable boundary data: Fourier coefficients c_{-n}..c_n on the
/// circle, or values at the nodes of a rule.
class BoundaryFunction {
 public:
  struct Fourier {
    int n_max = 0;
    std::vector<cplx> c;  // c[n + n_max]
  };
  struct Nodes {
    RulePtr rule;
    std::vector<cplx> v;
  };

  static BoundaryFunction fourier(int n_max, std::vector<cplx> c) {
    if (n_max < 0 || static_cast<int>(c.size()) != 2 * n_max + 1)
      throw UsageError("Fourier coefficient vector must have 2 n_max + 1 entries");
    return BoundaryFunction(Fourier{n_max, std::move(c)});
  }
  /// Trigonometric polynomial from a map n -> c_n.
  static BoundaryFunction trig(std::initializer_list<std::pair<int, cplx>> terms) {
    int n_max = 0;
    for (auto& [n, c] : terms) n_max = std::max(n_max, std::abs(n));
    std::vector<cplx> c(2 * n_max + 1);
    for (auto& [n, v] : terms) c[n + n_max] += v;
    return fourier(n_max, std::move(c));
  }
  static BoundaryFunction nodes(RulePtr rule, std::vector<cplx> v) {
    if (!rule || v.size() != rule->size()) throw UsageError("node values do not match the rule");
    return BoundaryFunction(Nodes{std::move(rule), std::move(v)});
  }
  /// Samples a callable g(BoundaryPoint) at the nodes of a rule.
  template <class G>
  static BoundaryFunction sample(RulePtr rule, G&& g) {
    std::vector<cplx> v;
    v.reserve(rule->size());
    for (const auto& xi : rule->nodes()) v.push_back(cplx(g(xi)));
    return nodes(std::move(rule), std::move(v));
  }

  bool is_fourier() const { return std::holds_alternative<Fourier>(rep_); }
  const Fourier& as_fourier() const { return std::get<Fourier>(rep_); }
  const Nodes& as_nodes() const { return std::get<Nodes>(rep_); }
  Model model() const { return is_fourier() ? Model::disk() : as_nodes().rule->model(); }

  /// c_n, zero outside the stored range.
  cplx coeff(int n) const {
    const auto& f = as_fourier();
    return std::abs(n) > f.n_max ? cplx(0) : f.c[n + f.n_max];
  }

  /// Value at a boundary point (Fourier form only, or a node of the rule).
  cplx operator()(const BoundaryPoint& xi) const {
    if (is_fourier()) {
      const auto& f = as_fourier();
      cplx e(xi.c[0], xi.c[1]);
      cplx s = f.c[f.n_max], p = 1;
      for (int n = 1; n <= f.n_max; ++n) {
        p *= e;
        s += f.c[f.n_max + n] * p + f.c[f.n_max - n] * std::conj(p);
      }
      return s;
    }
    const auto& nd = as_nodes();
    for (std::size_t i = 0; i < nd.rule->size(); ++i)
      if (nd.rule->nodes()[i] == xi) return nd.v[i];
    throw UsageError("node-valued boundary function evaluated off its rule");
  }

 private:
  template <class R>
  explicit BoundaryFunction(R r) : rep_(std::move(r)) {}
  std::variant<Fourier, Nodes> rep_;
};

namespace detail {

inline cplx poisson_extend_unchecked(const BoundaryFunction& g, const Coords& x) {
  if (g.is_fourier()) {
    const auto& f = g.as_fourier();
    cplx z = x.z(), s = f.c[f.n_max], p = 1;
    for (int n = 1; n <= f.n_max; ++n) {
      p *= z;
      s += f.c[f.n_max + n] * p + f.c[f.n_max - n] * std::conj(p);
    }
    return s;
  }
  const auto& nd = g.as_nodes();
  const Model m = nd.rule->model();
  CompensatedSum<cplx> s;
  for (std::size_t i = 0; i < nd.v.size(); ++i)
    s.add(nd.rule->weights()[i] * poisson_kernel_unchecked(m, x, nd.rule->nodes()[i]) * nd.v[i]);
  return s.value();
}

}  // namespace detail

/// Poisson (Poisson–Szego, hyperbolic Poisson) extension of g to x.
inline cplx poisson_extend(const BoundaryFunction& g, const Point& x) {
  detail::check_point(g.model(), x);
  return detail::poisson_extend_unchecked(g, x);
}

inline cplx poisson_extend(const BoundaryFunction& g, const Point& x, const QuadratureRule& rule) {
  if (!(rule.model() == g.model())) throw UsageError("boundary function and rule belong to different models");
  return poisson_extend(g, x);
}

/// L2 inner product <f, g> against the normalized boundary measure.
inline cplx l2_inner(const BoundaryFunction& f, const BoundaryFunction& g) {
  if (f.is_fourier() != g.is_fourier() || !(f.model() == g.model()))
    throw UsageError("l2_inner: incompatible boundary functions");
  if (f.is_fourier()) {
    int n = std::max(f.as_fourier().n_max, g.as_fourier().n_max);
    CompensatedSum<cplx> s;
    for (int k = -n; k <= n; ++k) s.add(f.coeff(k) * std::conj(g.coeff(k)));
    return s.value();
  }
  const auto& a = f.as_nodes();
  const auto& b = g.as_nodes();
  if (a.rule != b.rule) throw UsageError("l2_inner: node functions on different rules");
  CompensatedSum<cplx> s;
  for (std::size_t i = 0; i < a.v.size(); ++i) s.add(a.rule->weights()[i] * a.v[i] * std::conj(b.v[i]));
  return s.value();
}

inline cplx l2_inner(const BoundaryFunction& f, const BoundaryFunction& g, const QuadratureRule& rule) {
  if (!(rule.model() == f.model())) throw UsageError("l2_inner: rule belongs to a different model");
  return l2_inner(f, g);
}

enum class KernelSpace { BoundaryFourier, BoundaryNodes, Hardy, Bergman };

/// Truncated representation of P_x, S_x, K^x or of a linear combination of them.
struct KernelVector {
  Model model = Model::disk();
  KernelSpace space = KernelSpace::BoundaryFourier;
  int n_max = 0;
  std::vector<cplx> v;  // BoundaryFourier: index n + n_max; Hardy/Bergman: index n
  RulePtr rule;

  static KernelVector zeros(const Model& m, KernelSpace sp, int n_max, RulePtr rule = nullptr) {
    KernelVector k;
    k.model = m;
    k.space = sp;
    k.n_max = n_max;
    k.rule = rule;
    std::size_t len = sp == KernelSpace::BoundaryFourier ? 2 * n_max + 1
                      : sp == KernelSpace::BoundaryNodes ? rule->size()
                                                         : n_max + 1;
    k.v.assign(len, 0);
    return k;
  }

  double norm2() const {
    CompensatedSum<double> s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s.add((space == KernelSpace::BoundaryNodes ? rule->weights()[i] : 1.0) * std::norm(v[i]));
    return s.value();
  }

  /// The boundary-data view of a boundary-space vector.
  BoundaryFunction as_boundary_function() const {
    if (space == KernelSpace::BoundaryFourier) return BoundaryFunction::fourier(n_max, v);
    if (space == KernelSpace::BoundaryNodes) return BoundaryFunction::nodes(rule, v);
    throw UsageError("holomorphic coefficient vectors are not boundary functions");
  }

  KernelVector& operator-=(const KernelVector& o) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
  }
  KernelVector& operator*=(cplx a) {
    for (auto& c : v) c *= a;
    return *this;
  }
};

namespace detail {

/// acc += w * (kernel vector of x).
inline void accumulate_kernel(KernelVector& acc, const Coords& x, double w) {
  switch (acc.space) {
    case KernelSpace::BoundaryFourier: {
      cplx xb = std::conj(x.z()), p = w;
      int n0 = acc.n_max;
      acc.v[n0] += p;
      for (int n = 1; n <= acc.n_max; ++n) {
        p *= xb;
        acc.v[n0 + n] += p;
        acc.v[n0 - n] += std::conj(p);
      }
      break;
    }
    case KernelSpace::Hardy: {
      cplx xb = std::conj(x.z()), p = w;
      for (int n = 0; n <= acc.n_max; ++n) {
        acc.v[n] += p;
        p *= xb;
      }
      break;
    }
    case KernelSpace::Bergman: {
      cplx xb = std::conj(x.z()), p = w;
      for (int n = 0; n <= acc.n_max; ++n) {
        acc.v[n] += std::sqrt((n + 1) / kPi) * p;
        p *= xb;
      }
      break;
    }
    case KernelSpace::BoundaryNodes: {
      const auto& nodes = acc.rule->nodes();
      for (std::size_t i = 0; i < nodes.size(); ++i) acc.v[i] += w * poisson_kernel_unchecked(acc.model, x, nodes[i]);
      break;
    }
  }
}

}  // namespace detail

/// P_x on the circle as Fourier coefficients (x-bar^n, n >= 0; x^|n|, n < 0).
inline KernelVector poisson_kernel_vector(const Point& x, int n_max) {
  detail::check_point(Model::disk(), x);
  KernelVector k = KernelVector::zeros(Model::disk(), KernelSpace::BoundaryFourier, n_max);
  detail::accumulate_kernel(k, x, 1.0);
  return k;
}

/// P_x as node values of a rule (any model).
inline KernelVector poisson_kernel_vector(const Point& x, RulePtr rule) {
  detail::check_point(rule->model(), x);
  KernelVector k = KernelVector::zeros(rule->model(), KernelSpace::BoundaryNodes, 0, rule);
  detail::accumulate_kernel(k, x, 1.0);
  return k;
}

/// Szego kernel S_x, coefficients x-bar^n for 0 <= n <= n_max.
inline KernelVector szego_vector(const Point& x, int n_max) {
  detail::check_point(Model::disk(), x);
  KernelVector k = KernelVector::zeros(Model::disk(), KernelSpace::Hardy, n_max);
  detail::accumulate_kernel(k, x, 1.0);
  return k;
}

/// Bergman kernel K^x in the orthonormal basis sqrt((n+1)/pi) z^n.
inline KernelVector bergman_vector(const Point& x, int n_max) {
  detail::check_point(Model::disk(), x);
  KernelVector k = KernelVector::zeros(Model::disk(), KernelSpace::Bergman, n_max);
  detail::accumulate_kernel(k, x, 1.0);
  return k;
}

/// Quadrature value of the integral of P(x, .)^2 over the boundary.
inline double kernel_l2_norm_sq(const Model& m, const Point& x, const QuadratureRule& rule) {
  detail::check_point(m, x);
  if (!(rule.model() == m)) throw UsageError("kernel_l2_norm_sq: rule belongs to a different model");
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double p = detail::poisson_kernel_unchecked(m, x, rule.nodes()[i]);
    s.add(rule.weights()[i] * p * p);
  }
  return s.value();
}

/// kernel_l2_norm_sq(x) * exp(-h d(o, x)); stays bounded by a power of d(o,x).
inline double kernel_growth_constant(const Model& m, const Point& x, const QuadratureRule& rule) {
  return kernel_l2_norm_sq(m, x, rule) * std::exp(-m.entropy() * dist(m, origin(m), x));
}

struct MvpQuadrature {
  int radial_nodes = 64;
  int angular_nodes = 128;
  int mc_directions = 4096;
  std::uint64_t seed = 1;
};

struct MvpResult {
  double residual = 0;
  double std_error = 0;
  double average = 0;
  double center_value = 0;
};

/// Ball average of u over B(x0, r) against mu, in geodesic polar coordinates
/// about x0. Circle directions are equispaced; sphere directions are Monte Carlo
/// and the standard error is reported.
template <class U>
MvpResult ball_average(const Model& m, const Point& x0, double r, U&& u, const MvpQuadrature& q = {}) {
  detail::check_point(m, x0);
  if (!(r > 0)) throw UsageError("ball average needs r > 0");
  const GaussRule& g = gauss_rule(q.radial_nodes);
  std::vector<double> rho(q.radial_nodes), wr(q.radial_nodes);
  double vol = 0;
  for (int i = 0; i < q.radial_nodes; ++i) {
    rho[i] = 0.5 * r * (g.x[i] + 1);
    wr[i] = 0.5 * r * g.w[i] * sphere_area(m, rho[i]);
    vol += wr[i];
  }
  std::vector<BoundaryPoint> dirs;
  if (m.kind() == ModelKind::PoincareDisk) {
    dirs = QuadratureRule::circle(q.angular_nodes).nodes();
  } else {
    dirs = QuadratureRule::sphere_mc(m, q.mc_directions, q.seed).nodes();
  }
  CompensatedSum<double> s1, s2;
  for (const auto& d : dirs) {
    CompensatedSum<double> gd;
    for (int i = 0; i < q.radial_nodes; ++i) {
      Point y;
      y.kind = m.kind();
      y.n = m.real_dim();
      double t = euclid_radius(rho[i]);
      for (int k = 0; k < y.n; ++k) y.c[k] = t * d.c[k];
      gd.add(wr[i] * u(involution(m, x0, y)));
    }
    double v = gd.value() / vol;
    s1.add(v);
    s2.add(v * v);
  }
  double n = static_cast<double>(dirs.size());
  MvpResult res;
  res.average = s1.value() / n;
  if (m.kind() != ModelKind::PoincareDisk) {
    double var = std::max(0.0, (s2.value() - n * res.average * res.average) / (n - 1));
    res.std_error = std::sqrt(var / n);
  }
  res.center_value = u(x0);
  res.residual = std::abs(res.center_value - res.average);
  return res;
}

/// |P(x0, xi) - ball average of P(., xi) over B(x0, r)|.
inline MvpResult mvp_residual(const Model& m, const Point& x0, const BoundaryPoint& xi, double r,
                              const MvpQuadrature& q = {}) {
  detail::check_boundary(m, xi);
  return ball_average(m, x0, r, [&](const Point& x) { return detail::poisson_kernel_unchecked(m, x, xi); }, q);
}

}  // namespace psrecon

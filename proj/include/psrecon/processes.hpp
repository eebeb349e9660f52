#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include "boundary.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "roots.hpp"

namespace psrecon {

enum class ProcessKind { GafZeros, Poisson, Synthetic };

inline std::string process_name(ProcessKind k) {
  switch (k) {
    case ProcessKind::GafZeros: return "gaf-zeros";
    case ProcessKind::Poisson: return "poisson";
    default: return "synthetic";
  }
}

inline ProcessKind parse_process(const std::string& s) {
  if (s == "gaf-zeros" || s == "gaf") return ProcessKind::GafZeros;
  if (s == "poisson") return ProcessKind::Poisson;
  if (s == "synthetic") return ProcessKind::Synthetic;
  throw UsageError("unknown process '" + s + "' (expected gaf-zeros or poisson)");
}

/// How a configuration was generated.
struct ConfigMeta {
  ProcessKind process = ProcessKind::Synthetic;
  std::optional<double> lambda;
  std::optional<double> R;
  std::optional<double> r_edge;
  int N = 0;
  std::uint64_t seed = 0;
};

/// A finite point sample.
struct Configuration {
  Model model = Model::disk();
  std::vector<Point> points;
  ConfigMeta meta;

  /// Hyperbolic radius about o of the region the sample covers.
  double truncation_radius() const {
    if (meta.R) return *meta.R;
    if (meta.r_edge) return geodesic_radius(*meta.r_edge);
    double r = 0;
    for (const auto& p : points) r = std::max(r, detail::dist_unchecked(origin(model), p));
    return r;
  }
  std::size_t size() const { return points.size(); }
};

/// Synthetic configuration from explicit points.
inline Configuration make_configuration(const Model& m, std::vector<Point> pts) {
  for (const auto& p : pts) detail::check_point(m, p);
  Configuration c;
  c.model = m;
  c.points = std::move(pts);
  return c;
}

/// Parameters of a sampler.
struct SamplerSpec {
  ProcessKind kind = ProcessKind::Poisson;
  Model model = Model::disk();
  double lambda = 1;
  double R = 10;
  int N = 256;
  double r_edge = 0.9;
  std::uint64_t seed = 0;

  void validate() const {
    if (kind == ProcessKind::GafZeros) {
      if (model.kind() != ModelKind::PoincareDisk) throw UsageError("gaf-zeros is defined on the disk only");
      if (N < 8) throw UsageError("gaf-zeros needs N >= 8");
      if (!(r_edge > 0 && r_edge <= 0.95)) throw UsageError("gaf-zeros needs 0 < r_edge <= 0.95");
    } else if (kind == ProcessKind::Poisson) {
      if (!(lambda > 0)) throw UsageError("poisson needs lambda > 0");
      if (!(R > 0)) throw UsageError("poisson needs R > 0");
    } else {
      throw UsageError("synthetic configurations have no sampler");
    }
  }
  /// Hyperbolic radius of the sampled region.
  double hyperbolic_radius() const { return kind == ProcessKind::GafZeros ? geodesic_radius(r_edge) : R; }
};

/// CDF of the geodesic radius of a mu-uniform point of B(o, R), as a
/// cubic Hermite spline on 4096 knots with exact derivatives.
class RadialCdf {
 public:
  RadialCdf(const Model& m, double R, int knots = 4096) : R_(R), h_(R / knots) {
    total_ = ball_volume(m, R);
    rho_.resize(knots + 1);
    F_.resize(knots + 1);
    f_.resize(knots + 1);
    CompensatedSum<double> acc;
    for (int j = 0; j <= knots; ++j) {
      rho_[j] = j * h_;
      if (j > 0) acc.add(gauss_fixed([&](double r) { return sphere_area(m, r); }, rho_[j - 1], rho_[j], 10));
      F_[j] = acc.value();
      f_[j] = sphere_area(m, rho_[j]);
    }
    double scale = F_[knots];
    for (int j = 0; j <= knots; ++j) {
      F_[j] /= scale;
      f_[j] /= scale;
    }
    F_[knots] = 1;
    bucket_.resize(knots);
    std::size_t j = 0;
    for (int b = 0; b < knots; ++b) {
      double u = double(b) / knots;
      while (j + 2 < rho_.size() && F_[j + 1] <= u) ++j;
      bucket_[b] = j;
    }
  }

  double total_volume() const { return total_; }

  double cdf(double rho) const {
    if (rho <= 0) return 0;
    if (rho >= R_) return 1;
    std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(rho / h_), rho_.size() - 2);
    return hermite(j, rho);
  }

  /// Radius with cdf(radius) = u to 1e-12, by Newton steps on the spline
  /// cell safeguarded by bisection of the bracket.
  double invert(double u) const {
    std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(u * bucket_.size()), bucket_.size() - 1);
    std::size_t j = bucket_[b];
    while (j + 2 < rho_.size() && F_[j + 1] <= u) ++j;
    double lo = rho_[j], hi = rho_[j + 1];
    double x = lo + (hi - lo) * (u - F_[j]) / std::max(F_[j + 1] - F_[j], 1e-300);
    for (int it2 = 0; it2 < 100 && hi - lo > 1e-12; ++it2) {
      auto [v, dv] = hermite_d(j, x);
      if (v < u)
        lo = x;
      else
        hi = x;
      double next = dv > 0 ? x - (v - u) / dv : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) < 1e-13) return next;
      x = next;
    }
    return x;
  }

 private:
  double hermite(std::size_t j, double rho) const {
    double t = (rho - rho_[j]) / h_;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * F_[j] + (t3 - 2 * t2 + t) * h_ * f_[j] + (-2 * t3 + 3 * t2) * F_[j + 1] +
           (t3 - t2) * h_ * f_[j + 1];
  }
  std::pair<double, double> hermite_d(std::size_t j, double rho) const {
    double t = (rho - rho_[j]) / h_;
    double t2 = t * t;
    double d = ((6 * t2 - 6 * t) * F_[j] + (-6 * t2 + 6 * t) * F_[j + 1]) / h_ + (3 * t2 - 4 * t + 1) * f_[j] +
               (3 * t2 - 2 * t) * f_[j + 1];
    return {hermite(j, rho), d};
  }
  double R_, h_, total_;
  std::vector<double> rho_, F_, f_;
  std::vector<std::size_t> bucket_;
};

/// Shared cache of radial CDFs keyed by (model, R).
inline std::shared_ptr<const RadialCdf> radial_cdf(const Model& m, double R) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const RadialCdf>> cache;
  auto key = std::make_tuple(static_cast<int>(m.kind()), m.dim(), R);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto cdf = std::make_shared<const RadialCdf>(m, R);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, cdf).first->second;
}

/// Poisson process with intensity lambda * mu restricted to B(o, R).
inline Configuration sample_poisson(const Model& m, double lambda, double R, std::uint64_t seed) {
  if (!(lambda > 0)) throw UsageError("poisson needs lambda > 0");
  if (!(R > 0)) throw UsageError("poisson needs R > 0");
  auto cdf = radial_cdf(m, R);
  Rng rng = make_rng(seed);
  std::poisson_distribution<long long> count(lambda * cdf->total_volume());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss;
  long long n = count(rng);
  Configuration c;
  c.model = m;
  c.meta = {ProcessKind::Poisson, lambda, R, std::nullopt, 0, seed};
  c.points.reserve(n);
  for (long long i = 0; i < n; ++i) {
    double rho = cdf->invert(unif(rng));
    double t = euclid_radius(rho);
    Point p;
    p.kind = m.kind();
    p.n = m.real_dim();
    if (m.kind() == ModelKind::PoincareDisk) {
      double th = 2 * kPi * unif(rng);
      p.c[0] = t * std::cos(th);
      p.c[1] = t * std::sin(th);
    } else {
      BoundaryPoint d = QuadratureRule::random_direction(m, rng, gauss);
      for (int k = 0; k < p.n; ++k) p.c[k] = t * d.c[k];
    }
    c.points.push_back(p);
  }
  return c;
}

/// Zeros in |z| <= r_edge of the degree-N truncation of the hyperbolic GAF.
inline Configuration sample_gaf_zeros(int N, double r_edge, std::uint64_t seed) {
  SamplerSpec spec;
  spec.kind = ProcessKind::GafZeros;
  spec.N = N;
  spec.r_edge = r_edge;
  spec.validate();
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::vector<cplx> g(N + 1);
  double gmax = 0;
  for (auto& c : g) {
    double re = gauss(rng);
    double im = gauss(rng);
    c = {re, im};
    gmax = std::max(gmax, std::abs(c));
  }
  std::vector<cplx> roots = aberth_roots(g);
  Configuration c;
  c.model = Model::disk();
  c.meta = {ProcessKind::GafZeros, std::nullopt, std::nullopt, r_edge, N, seed};
  double worst = 0;
  for (cplx z : roots) {
    if (std::abs(z) > r_edge) continue;
    worst = std::max(worst, std::abs(poly_eval(g, z)));
    Point p;
    p.kind = ModelKind::PoincareDisk;
    p.n = 2;
    p.set_z(0, z);
    c.points.push_back(p);
  }
  if (worst > 1e-10 * gmax)
    throw NumericalError("GAF root residual " + fmt17(worst) + " exceeds contract", worst);
  std::sort(c.points.begin(), c.points.end(), [](const Point& a, const Point& b) {
    return a.c[0] != b.c[0] ? a.c[0] < b.c[0] : a.c[1] < b.c[1];
  });
  return c;
}

/// Sample for replication `rep` of a spec; the seed is split by counter.
inline Configuration sample(const SamplerSpec& spec, std::uint64_t rep) {
  spec.validate();
  std::uint64_t s = split_seed(spec.seed, rep);
  if (spec.kind == ProcessKind::GafZeros) return sample_gaf_zeros(spec.N, spec.r_edge, s);
  return sample_poisson(spec.model, spec.lambda, spec.R, s);
}

/// Density of the first intensity against Lebesgue measure.
inline double first_intensity(const Model& m, const SamplerSpec& spec, const Point& x) {
  if (spec.kind == ProcessKind::GafZeros) {
    if (m.kind() != ModelKind::PoincareDisk) throw UsageError("gaf-zeros is defined on the disk only");
    return volume_density(m, x) / kPi;
  }
  return spec.lambda * volume_density(m, x);
}

}  // namespace psrecon

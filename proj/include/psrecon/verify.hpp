#pragma once

#include <chrono>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "reconstruct.hpp"
#include "rng.hpp"
#include "variance.hpp"
#include "weights.hpp"

namespace psrecon {

/// Outcome of one deterministic check: a measured quantity against a bound.
struct CheckOutcome {
  double measured = 0;
  double bound = 0;
  bool pass = false;
  std::string detail;
};

/// A named check; `scale` multiplies every closed-form constant it uses.
struct Check {
  std::string group;
  std::string name;
  std::function<CheckOutcome(double scale)> run;
};

namespace detail {

inline CheckOutcome at_most(double measured, double bound, std::string what = {}) {
  return {measured, bound, measured <= bound, std::move(what)};
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline Point random_point(const Model& m, Rng& rng, double max_rho = 6) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, max_rho);
  BoundaryPoint d = QuadratureRule::random_direction(m, rng, g);
  double t = euclid_radius(u(rng));
  Point p;
  p.kind = d.kind;
  p.n = d.n;
  for (int i = 0; i < d.n; ++i) p.c[i] = t * d.c[i];
  return p;
}

inline BoundaryPoint random_boundary(const Model& m, Rng& rng) {
  std::normal_distribution<double> g;
  return QuadratureRule::random_direction(m, rng, g);
}

inline void add_geometry_checks(std::vector<Check>& out, const Model& m, std::uint64_t seed) {
  const int cases = 1000;
  const std::string tag = m.name();
  out.push_back({"geometry", "involution-squared/" + tag, [m, seed](double) {
                   Rng rng = make_rng(seed);
                   double worst = 0;
                   for (int i = 0; i < cases; ++i) {
                     Point w = random_point(m, rng, 4), x = random_point(m, rng, 4);
                     Point y = involution(m, w, involution(m, w, x));
                     for (int k = 0; k < x.n; ++k) worst = std::max(worst, std::abs(y.c[k] - x.c[k]));
                     worst = std::max(worst, std::abs(involution(m, w, w).norm()));
                   }
                   return at_most(worst, 1e-10);
                 }});
  out.push_back({"geometry", "distance-symmetry-triangle/" + tag, [m, seed](double) {
                   Rng rng = make_rng(seed + 1);
                   double worst = 0;
                   for (int i = 0; i < cases; ++i) {
                     Point x = random_point(m, rng), y = random_point(m, rng), z = random_point(m, rng);
                     double dxy = dist(m, x, y), dyx = dist(m, y, x);
                     worst = std::max(worst, std::abs(dxy - dyx));
                     worst = std::max(worst, dxy - dist(m, x, z) - dist(m, z, y));
                     worst = std::max(worst, dist(m, x, x));
                   }
                   return at_most(worst, 1e-10);
                 }});
  out.push_back({"geometry", "involution-isometry/" + tag, [m, seed](double) {
                   Rng rng = make_rng(seed + 2);
                   double worst = 0;
                   for (int i = 0; i < cases; ++i) {
                     Point w = random_point(m, rng, 3), x = random_point(m, rng, 3), y = random_point(m, rng, 3);
                     double d0 = dist(m, x, y);
                     worst = std::max(worst, std::abs(dist(m, involution(m, w, x), involution(m, w, y)) - d0) /
                                                 std::max(1.0, d0));
                   }
                   return at_most(worst, 1e-10);
                 }});
  out.push_back({"geometry", "busemann-cocycle/" + tag, [m, seed](double) {
                   Rng rng = make_rng(seed + 3);
                   double worst = 0;
                   for (int i = 0; i < cases; ++i) {
                     BoundaryPoint xi = random_boundary(m, rng);
                     Point x = random_point(m, rng), y = random_point(m, rng), w = random_point(m, rng);
                     double bxy = busemann(m, xi, x, y);
                     worst = std::max(worst, std::abs(bxy + busemann(m, xi, y, w) - busemann(m, xi, x, w)));
                     worst = std::max(worst, std::abs(bxy) - dist(m, x, y));
                   }
                   return at_most(worst, 1e-10);
                 }});
  out.push_back({"geometry", "kernel-busemann/" + tag, [m, seed](double) {
                   Rng rng = make_rng(seed + 4);
                   double worst = 0;
                   Point o = origin(m);
                   for (int i = 0; i < cases; ++i) {
                     BoundaryPoint xi = random_boundary(m, rng);
                     Point x = random_point(m, rng);
                     double p = poisson_kernel(m, x, xi);
                     double q = std::exp(-m.entropy() * busemann(m, xi, x, o));
                     worst = std::max(worst, rel_gap(q, p));
                   }
                   return at_most(worst, 1e-10);
                 }});
}

inline void add_residue_checks(std::vector<Check>& out, std::uint64_t seed) {
  const Identity kinds[] = {Identity::I2, Identity::I3, Identity::I4, Identity::I9,
                            Identity::I10, Identity::I11, Identity::LemRepHardy, Identity::LemRep};
  for (Identity k : kinds) {
    int tuples = (k == Identity::LemRepHardy || k == Identity::LemRep) ? 10 : 50;
    out.push_back({"residue", "identity/" + identity_name(k), [k, seed, tuples](double scale) {
                     Rng rng = make_rng(split_seed(seed, std::uint64_t(k)));
                     std::uniform_real_distribution<double> rad(0, 0.8), ang(0, 2 * kPi);
                     double worst = 0;
                     for (int i = 0; i < tuples; ++i) {
                       IdentityParams p{std::polar(rad(rng), ang(rng)), std::polar(rad(rng), ang(rng)),
                                        std::polar(rad(rng), ang(rng))};
                       IdentityValue v = identity_angular(k, p);
                       worst = std::max(worst, std::abs(v.lhs - scale * v.rhs) / std::abs(scale * v.rhs));
                     }
                     return at_most(worst, 1e-8, std::to_string(tuples) + " random tuples");
                   }});
  }
  struct Spot {
    std::string name;
    Identity kind;
    IdentityParams p;
    double value;
  };
  const double pi2 = kPi * kPi;
  std::vector<Spot> spots = {
      {"lem-rep-hardy@0", Identity::LemRepHardy, {}, 1 / kPi},
      {"lem-rep@0", Identity::LemRep, {}, 1 / pi2},
      {"I10@0", Identity::I10, {}, 1 / (pi2 * kPi)},
      {"lem-rep-hardy@0.5", Identity::LemRepHardy, {0.5, 0, 0}, 1 / (kPi * 0.75 * 0.75 * 0.75)},
      {"lem-rep@0.5", Identity::LemRep, {0.5, 0, 0}, 1 / (pi2 * 0.75 * 0.75 * 0.75 * 0.75)},
  };
  for (auto s : spots) {
    out.push_back({"residue", "spot/" + s.name, [s](double scale) {
                     IdentityValue v = identity_angular(s.kind, s.p);
                     double ref = scale * s.value;
                     double gap = std::max(rel_gap(v.lhs.real(), ref), rel_gap(v.rhs.real(), ref));
                     return at_most(gap, 1e-8);
                   }});
  }
}

inline void add_mvp_checks(std::vector<Check>& out) {
  out.push_back({"mvp", "disk", [](double) {
                   Model m = Model::disk();
                   double worst = 0;
                   for (double r : {0.5, 1.0, 2.0}) {
                     auto res = mvp_residual(m, disk_point({0.3, -0.2}), disk_boundary(1.1), r);
                     worst = std::max(worst, res.residual);
                   }
                   return at_most(worst, 1e-6);
                 }});
  for (const char* name : {"complex:2", "real:3"}) {
    out.push_back({"mvp", name, [name](double) {
                     Model m = Model::parse(name);
                     std::vector<double> xs(m.real_dim(), 0.0), ts(m.real_dim(), 0.0);
                     xs[0] = 0.3;
                     xs[1] = -0.2;
                     ts[0] = std::sqrt(0.5);
                     ts[m.real_dim() - 1] = std::sqrt(0.5);
                     auto res = mvp_residual(m, make_point(m, xs), make_boundary(m, ts), 1.0);
                     return at_most(res.residual, 4 * res.std_error, "in standard errors: " + fmt17(res.residual / res.std_error));
                   }});
  }
}

inline void add_closed_form_checks(std::vector<Check>& out) {
  out.push_back({"closed-form", "distance/log3", [](double scale) {
                   double d = dist(Model::disk(), origin(Model::disk()), disk_point(0.5));
                   return at_most(rel_gap(d, scale * std::log(3.0)), 1e-14);
                 }});
  out.push_back({"closed-form", "ball-volume/disk", [](double scale) {
                   double r = 3, v = ball_volume(Model::disk(), r);
                   return at_most(rel_gap(v, scale * kPi * std::pow(std::sinh(r / 2), 2)), 1e-10);
                 }});
  out.push_back({"closed-form", "ball-volume/complex:2", [](double scale) {
                   double r = 3, v = ball_volume(Model::complex_ball(2), r);
                   return at_most(rel_gap(v, scale * kPi * kPi / 2 * std::pow(std::sinh(r / 2), 4)), 1e-10);
                 }});
  out.push_back({"closed-form", "ball-volume/real:3", [](double scale) {
                   double r = 3, v = ball_volume(Model::real_ball(3), r);
                   return at_most(rel_gap(v, scale * kPi / 4 * (std::sinh(r) * std::cosh(r) - r)), 1e-10);
                 }});
  out.push_back({"closed-form", "kernel-norm/disk", [](double scale) {
                   auto rule = QuadratureRule::circle(256);
                   double v = kernel_l2_norm_sq(Model::disk(), disk_point(0.5), rule);
                   return at_most(rel_gap(v, scale * 1.25 / 0.75), 1e-12);
                 }});
  out.push_back({"closed-form", "poisson-extension/disk", [](double scale) {
                   auto g = BoundaryFunction::trig({{1, 1.0}});
                   cplx z(0.3, 0.2);
                   return at_most(std::abs(poisson_extend(g, disk_point(z)) - scale * z), 1e-14);
                 }});
  out.push_back({"closed-form", "sigma-bar/disk", [](double scale) {
                   double s = 2, v = radial_exponential_integral(Model::disk(), s);
                   return at_most(rel_gap(v, scale * kPi / (2 * (s * s - 1))), 1e-10);
                 }});
  out.push_back({"closed-form", "weight-sum/ws1.5", [](double scale) {
                   double v = expected_weight_sum(RadialWeight::ws(1.5));
                   return at_most(rel_gap(v, scale * expected_ws_sum(1.5)), 1e-10);
                 }});
  out.push_back({"closed-form", "hardy-variance/two-routes", [](double scale) {
                   RadialWeight W = RadialWeight::ws(1.5);
                   double a = var_hardy_closed(W, origin(Model::disk()));
                   double b = var_hardy_general(W);
                   return at_most(rel_gap(a, scale * b), 1e-8);
                 }});
  out.push_back({"closed-form", "hardy-variance/product-rule", [](double scale) {
                   RadialWeight W = RadialWeight::indicator(0.5);
                   double a = var_hardy_closed(W, origin(Model::disk()));
                   double b = var_hardy_general([](cplx w) { return cplx(std::abs(w) <= 0.5 ? 1.0 : 0.0); }, 0.5);
                   return at_most(rel_gap(a, scale * b), 1e-6);
                 }});
  out.push_back({"closed-form", "bergman-sandwich", [](double scale) {
                   Sandwich s = bergman_sandwich(RadialWeight::indicator(0.5), origin(Model::disk()));
                   double lo = s.value / (scale * s.lower), hi = scale * s.upper / s.value;
                   return at_most(-std::min(lo, hi), -1.0, "value within [lower, upper]");
                 }});
  out.push_back({"closed-form", "failure-bound", [](double scale) {
                   double worst = INFINITY;
                   for (const auto& W : builtin_weights())
                     worst = std::min(worst, failure_ratio(W, origin(Model::disk())));
                   return at_most(scale * kFailureBound, worst, "minimum ratio over built-in weights " + fmt17(worst));
                 }});
  out.push_back({"closed-form", "decay/monotone", [](double) {
                   Point z = disk_point(0.3);
                   double prev = INFINITY, worst = -INFINITY;
                   for (double s : {1.1, 1.01, 1.001}) {
                     double r = cor53_ratio(s, z);
                     worst = std::max(worst, r - prev);
                     prev = r;
                   }
                   return at_most(worst, 0.0, "largest increase of the ratio along s");
                 }});
}

}  // namespace detail

/// Every deterministic check of `psrecon verify`.
inline std::vector<Check> verification_checks(std::uint64_t seed = 20240917) {
  std::vector<Check> out;
  for (const char* m : {"disk", "complex:2", "complex:3", "real:3", "real:5"})
    detail::add_geometry_checks(out, Model::parse(m), seed);
  detail::add_residue_checks(out, seed);
  detail::add_mvp_checks(out);
  detail::add_closed_form_checks(out);
  return out;
}

struct CheckRow {
  std::string group;
  std::string name;
  CheckOutcome outcome;
  double seconds = 0;
};

/// Runs the checks whose group or name contains `filter`.
inline std::vector<CheckRow> run_checks(const std::vector<Check>& checks, const std::string& filter, double perturb,
                                        unsigned threads = 0) {
  std::vector<const Check*> sel;
  for (const auto& c : checks)
    if (filter.empty() || c.group == filter || c.name.find(filter) != std::string::npos) sel.push_back(&c);
  return parallel_map(
      sel.size(),
      [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        CheckRow row{sel[i]->group, sel[i]->name, {}, 0};
        try {
          row.outcome = sel[i]->run(1 + perturb);
        } catch (const std::exception& e) {
          row.outcome = {NAN, NAN, false, e.what()};
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return row;
      },
      threads);
}

inline void print_check_table(std::ostream& os, const std::vector<CheckRow>& rows) {
  std::size_t w = 4;
  for (const auto& r : rows) w = std::max(w, r.group.size() + r.name.size() + 1);
  for (const auto& r : rows) {
    std::string label = r.group + ":" + r.name;
    os << (r.outcome.pass ? "PASS " : "FAIL ") << label << std::string(w - label.size() + 2, ' ')
       << "measured=" << fmt17(r.outcome.measured) << " bound=" << fmt17(r.outcome.bound);
    if (!r.outcome.detail.empty()) os << "  (" << r.outcome.detail << ")";
    os << "\n";
  }
}

}  // namespace psrecon

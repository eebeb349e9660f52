#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <limits>
#include <vector>

#include "core.hpp"

namespace psrecon {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return g;
}

/// Cached rule of order n; safe to call from several threads.
inline const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

/// Fixed-order Gauss–Legendre on [a, b].
template <class F>
auto gauss_fixed(F&& f, double a, double b, int n = 20) {
  const GaussRule& g = gauss_rule(n);
  double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R s{};
  for (int i = 0; i < n; ++i) s += g.w[i] * f(mid + half * g.x[i]);
  return s * half;
}

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-13;
  long max_evals = 1L << 20;
  int order = 15;
};

struct QuadResult {
  double value = 0;
  double error = 0;
  long evals = 0;
};

/// Adaptive Gauss–Legendre: each panel is compared against its two halves and
/// bisected until the estimated error fits the tolerance. Throws NumericalError
/// when the evaluation cap is hit.
template <class F>
QuadResult adaptive_gl(F&& f, double a, double b, const QuadOptions& opt = {}) {
  struct Panel {
    double a, b, whole;
    int depth;
  };
  QuadResult res;
  if (a == b) return res;
  const int n = opt.order;
  auto panel = [&](double lo, double hi) {
    res.evals += n;
    return gauss_fixed(f, lo, hi, n);
  };
  double first = panel(a, b);
  std::vector<Panel> stack{{a, b, first, 0}};
  CompensatedSum<double> total, err;
  double scale = std::abs(first);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double m = 0.5 * (p.a + p.b);
    double l = panel(p.a, m), r = panel(m, p.b);
    double refined = l + r;
    double e = std::abs(refined - p.whole);
    scale = std::max(scale, std::abs(refined));
    double frac = (p.b - p.a) / (b - a);
    double tol = std::max(std::max(opt.abs_tol, opt.rel_tol * scale) * std::max(frac, 1e-6),
                          64 * std::numeric_limits<double>::epsilon() * std::abs(refined));
    if (e <= tol || p.depth > 60 || (p.b - p.a) < 1e-15 * std::max(1.0, std::abs(m))) {
      total.add(refined);
      err.add(e);
      continue;
    }
    if (res.evals > opt.max_evals) {
      throw NumericalError("adaptive quadrature exceeded evaluation cap", err.value() + e);
    }
    stack.push_back({p.a, m, l, p.depth + 1});
    stack.push_back({m, p.b, r, p.depth + 1});
  }
  res.value = total.value();
  res.error = err.value();
  return res;
}

/// Adaptive integral over [a, b] split at the given interior break points.
template <class F>
QuadResult adaptive_gl_breaks(F&& f, double a, double b, std::vector<double> breaks,
                              const QuadOptions& opt = {}) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (hi <= lo) continue;
    QuadResult r = adaptive_gl(f, lo, hi, opt);
    out.value += r.value;
    out.error += r.error;
    out.evals += r.evals;
  }
  return out;
}

/// Integral over [a, inf) of a function with exponential decay. Panels double
/// in width until a panel contributes less than rel_tol of the running total.
template <class F>
QuadResult adaptive_gl_semi_infinite(F&& f, double a, double first_width,
                                     const QuadOptions& opt = {}) {
  QuadResult out;
  double lo = a, w = first_width;
  for (int k = 0; k < 200; ++k) {
    QuadResult r = adaptive_gl(f, lo, lo + w, opt);
    out.value += r.value;
    out.error += r.error;
    out.evals += r.evals;
    if (std::abs(r.value) <= 1e-17 * std::abs(out.value) && k > 2) return out;
    lo += w;
    w *= 2;
  }
  throw NumericalError("semi-infinite quadrature did not settle", out.error);
}

}  // namespace psrecon

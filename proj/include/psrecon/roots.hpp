#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"

namespace psrecon {

struct RootOptions {
  int max_sweeps = 500;
  double step_tol = 1e-13;
};

namespace detail {

/// Newton correction p(z)/p'(z); evaluates the reversed polynomial when |z| > 1.
inline cplx newton_ratio(const std::vector<cplx>& a, cplx z) {
  const int n = static_cast<int>(a.size()) - 1;
  if (std::abs(z) <= 1) {
    cplx p = a[n], dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + a[k];
    }
    return p / dp;
  }
  cplx w = 1.0 / z, q = a[0], dq = 0;
  for (int k = 1; k <= n; ++k) {
    dq = dq * w + q;
    q = q * w + a[k];
  }
  return 1.0 / (w * (double(n) - w * dq / q));
}

}  // namespace detail

/// p(z) = sum a_k z^k by Horner.
inline cplx poly_eval(const std::vector<cplx>& a, cplx z) {
  cplx p = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) p = p * z + *it;
  return p;
}

/// Cauchy's bound: the positive root of |a_n| x^n = sum_{k<n} |a_k| x^k.
inline double cauchy_bound(const std::vector<cplx>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  double an = std::abs(a[n]);
  double hi = 0;
  for (int k = 0; k < n; ++k) hi = std::max(hi, std::abs(a[k]) / an);
  hi += 1;
  if (hi == 1) return 0;
  auto excess = [&](double x) {
    double s = 0, p = 1 / x;
    for (int k = n - 1; k >= 0; --k, p /= x) s += std::abs(a[k]) * p;
    return an - s;
  };
  double lo = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

/// All roots of sum a_k z^k (ascending coefficients) by Aberth–Ehrlich
/// iteration started on the circle of radius min(Cauchy bound, geometric mean
/// of the root moduli), followed by one Newton
/// step per root. Trailing zero coefficients reduce the degree.
inline std::vector<cplx> aberth_roots(std::vector<cplx> a, const RootOptions& opt = {}) {
  double amax = 0;
  for (cplx c : a) amax = std::max(amax, std::abs(c));
  if (amax == 0) throw DegenerateError("zero polynomial");
  while (!a.empty() && std::abs(a.back()) <= 1e-300 * amax) a.pop_back();
  const int n = static_cast<int>(a.size()) - 1;
  if (n <= 0) return {};
  double bound = cauchy_bound(a);
  if (std::abs(a[0]) > 0) bound = std::min(bound, std::pow(std::abs(a[0]) / std::abs(a[n]), 1.0 / n));
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(bound, 2 * kPi * k / n + 0.4);
  std::vector<char> done(n, 0);
  int active = n;
  for (int sweep = 0; sweep < opt.max_sweeps && active > 0; ++sweep) {
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx r = detail::newton_ratio(a, z[k]);
      double sr = 0, si = 0;
      const double xr = z[k].real(), xi = z[k].imag();
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        double dr = xr - z[j].real(), di = xi - z[j].imag();
        double inv = 1 / (dr * dr + di * di);
        sr += dr * inv;
        si -= di * inv;
      }
      cplx s(sr, si);
      cplx w = r / (1.0 - r * s);
      z[k] -= w;
      if (std::abs(w) <= opt.step_tol * std::max(1.0, std::abs(z[k]))) {
        done[k] = 1;
        --active;
      }
    }
  }
  if (active > 0) {
    double worst = 0;
    for (int k = 0; k < n; ++k)
      if (!done[k]) worst = std::max(worst, std::abs(poly_eval(a, z[k])));
    throw NumericalError("Aberth iteration did not converge in " + std::to_string(opt.max_sweeps) +
                             " sweeps; worst residual " + fmt17(worst),
                         worst);
  }
  for (int k = 0; k < n; ++k) z[k] -= detail::newton_ratio(a, z[k]);
  return z;
}

}  // namespace psrecon

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"

namespace psrecon {

/// Nonnegative radial weight on the disk, a function of the modulus |x|.
class RadialWeight {
 public:
  enum class Kind { Constant, Indicator, Ws, Table };

  /// W = c everywhere.
  static RadialWeight constant(double c) {
    if (!(c >= 0)) throw UsageError("weight must be nonnegative");
    RadialWeight w(Kind::Constant);
    w.c_ = c;
    w.rho_max_ = 1;
    return w;
  }
  /// W = 1 on |x| <= rho.
  static RadialWeight indicator(double rho) {
    if (!(rho > 0 && rho < 1)) throw UsageError("indicator radius must lie in (0, 1)");
    RadialWeight w(Kind::Indicator);
    w.rho_max_ = rho;
    return w;
  }
  /// W_s(x) = (1 - |x|^2)^s on |x|^2 <= 2 - s, for 1 < s < 2.
  static RadialWeight ws(double s) {
    if (!(s > 1 && s < 2)) throw UsageError("W_s needs 1 < s < 2");
    RadialWeight w(Kind::Ws);
    w.c_ = s;
    w.rho_max_ = std::sqrt(2 - s);
    return w;
  }
  /// Step function: values[i] on radii[i-1] <= |x| < radii[i] (radii[-1] = 0).
  static RadialWeight table(std::vector<double> radii, std::vector<double> values) {
    if (radii.empty() || radii.size() != values.size()) throw UsageError("weight table needs matching radii and values");
    double prev = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > prev && radii[i] < 1)) throw UsageError("weight table radii must increase inside (0, 1)");
      if (!(values[i] >= 0)) throw UsageError("weight must be nonnegative");
      prev = radii[i];
    }
    RadialWeight w(Kind::Table);
    w.rho_max_ = radii.back();
    w.radii_ = std::move(radii);
    w.values_ = std::move(values);
    return w;
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double rho_max() const { return rho_max_; }
  double parameter() const { return kind_ == Kind::Ws ? c_ : kind_ == Kind::Indicator ? rho_max_ : c_; }

  /// W at modulus r.
  double operator()(double r) const {
    switch (kind_) {
      case Kind::Constant: return c_;
      case Kind::Indicator: return r <= rho_max_ ? 1.0 : 0.0;
      case Kind::Ws: {
        double q = 1 - r * r;
        return r * r <= 2 - c_ ? std::pow(q, c_) : 0.0;
      }
      default:
        for (std::size_t i = 0; i < radii_.size(); ++i)
          if (r < radii_[i]) return values_[i];
        return r <= rho_max_ ? values_.back() : 0.0;
    }
  }

  /// W as a function of u = 1 - |x|^2.
  double of_u(double u) const {
    if (kind_ == Kind::Ws) return u >= c_ - 1 ? std::pow(u, c_) : 0.0;
    return (*this)(std::sqrt(std::max(0.0, 1 - u)));
  }

  /// Discontinuities of of_u in (0, 1).
  std::vector<double> u_breaks() const {
    std::vector<double> b;
    if (kind_ == Kind::Indicator || kind_ == Kind::Ws) b.push_back(1 - rho_max_ * rho_max_);
    for (double r : radii_) b.push_back(1 - r * r);
    return b;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Constant: return "constant(" + fmt17(c_) + ")";
      case Kind::Indicator: return "indicator(" + fmt17(rho_max_) + ")";
      case Kind::Ws: return "W_s(" + fmt17(c_) + ")";
      default: return "table(" + std::to_string(radii_.size()) + ")";
    }
  }

 private:
  explicit RadialWeight(Kind k) : kind_(k) {}
  Kind kind_;
  double c_ = 0;
  double rho_max_ = 0;
  std::vector<double> radii_, values_;
};

/// Built-in family {indicator(0.2..0.8)} and {W_s: s = 1.1..1.9}.
inline std::vector<RadialWeight> builtin_weights() {
  std::vector<RadialWeight> out;
  for (int i = 2; i <= 8; ++i) out.push_back(RadialWeight::indicator(i / 10.0));
  for (int i = 11; i <= 19; ++i) out.push_back(RadialWeight::ws(i / 10.0));
  return out;
}

/// E sum W_s(phi_z(x)) under the GAF zero process: (1 - (s-1)^(s-1)) / (s-1).
inline double expected_ws_sum(double s) { return (1 - std::pow(s - 1, s - 1)) / (s - 1); }

}  // namespace psrecon

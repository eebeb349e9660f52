#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "io.hpp"

namespace psrecon {

struct ConfigKey {
  const char* name;
  const char* default_value;
  const char* help;
};

/// Recognised configuration keys with their defaults.
inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"model", "disk", "disk | complex:D | real:M"},
      {"process", "poisson", "poisson | gaf"},
      {"lambda", "1", "Poisson intensity"},
      {"R", "10", "Poisson truncation radius (hyperbolic)"},
      {"N", "256", "GAF truncation degree"},
      {"r_edge", "0.9", "GAF Euclidean truncation radius"},
      {"seed", "1", "base seed"},
      {"s_grid", "3,2.5,2,1.6,1.3,1.15", "comma-separated exponents"},
      {"schedule", "grid", "grid | inverse-square | log-slow"},
      {"schedule_terms", "6", "number of schedule terms"},
      {"n_reps", "auto", "replications (auto: 1 for reconstruct and psmeasure, 200 for variance)"},
      {"z", "0", "evaluation point, comma-separated coordinates"},
      {"y", "0", "base point for the Patterson-Sullivan measure"},
      {"target", "constant", "constant | coordinate | pole"},
      {"weight", "indicator:0.5", "constant | indicator:RHO | ws:S"},
      {"space", "hardy", "scalar | hardy | boundary | bergman"},
      {"variance_mode", "report", "report | failure-scan | up-exp-scan"},
      {"s", "auto", "exponent for psmeasure (auto: h + 0.2)"},
      {"n_max", "8", "Fourier truncation"},
      {"report", "comparison", "comparison | exponent"},
      {"extension", "radial", "radial | harmonic test functions at interior atoms"},
      {"scan_out", "", "optional scan CSV path for variance reports"},
      {"out", "-", "output path, '-' for stdout"},
  };
  return keys;
}

/// Plain-text `key = value` run configuration.
class RunConfig {
 public:
  static RunConfig parse(std::istream& is) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
      c.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return c;
  }
  static RunConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file " + path);
    return parse(f);
  }

  void set(const std::string& key, const std::string& value) {
    find(key);
    values_[key] = value;
  }

  std::string str(const std::string& key) const {
    auto it = values_.find(key);
    return it != values_.end() ? it->second : find(key).default_value;
  }
  double num(const std::string& key) const {
    try {
      return detail::parse_double(str(key));
    } catch (const UsageError&) {
      throw UsageError("config key '" + key + "' is not a number: " + str(key));
    }
  }
  long long integer(const std::string& key) const {
    double v = num(key);
    if (v != std::floor(v)) throw UsageError("config key '" + key + "' must be an integer");
    return (long long)v;
  }
  std::uint64_t u64(const std::string& key) const {
    std::string s = str(key);
    try {
      std::size_t pos = 0;
      auto v = std::stoull(s, &pos);
      if (pos == s.size() && s[0] != '-') return v;
    } catch (const std::exception&) {
    }
    throw UsageError("config key '" + key + "' must be an unsigned integer");
  }
  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& f : detail::split(str(key), ',')) {
      if (detail::trim(f).empty()) continue;
      out.push_back(detail::parse_double(f));
    }
    return out;
  }

  Model model() const { return Model::parse(str("model")); }
  Point point(const std::string& key) const {
    Model m = model();
    std::vector<double> xs = list(key);
    if (xs.size() == 1 && xs[0] == 0) return origin(m);
    return make_point(m, xs);
  }
  SamplerSpec sampler() const {
    SamplerSpec s;
    s.model = model();
    std::string p = str("process");
    if (p == "poisson")
      s.kind = ProcessKind::Poisson;
    else if (p == "gaf" || p == "gaf-zeros")
      s.kind = ProcessKind::GafZeros;
    else
      throw UsageError("unknown process '" + p + "'");
    s.lambda = num("lambda");
    s.R = num("R");
    s.N = int(integer("N"));
    s.r_edge = num("r_edge");
    s.seed = u64("seed");
    s.validate();
    return s;
  }
  RadialWeight weight() const { return parse_weight(str("weight")); }

  static RadialWeight parse_weight(const std::string& w) {
    if (w == "constant") return RadialWeight::constant(1);
    auto colon = w.find(':');
    if (colon != std::string::npos) {
      std::string kind = w.substr(0, colon);
      double v = detail::parse_double(w.substr(colon + 1));
      if (kind == "indicator") return RadialWeight::indicator(v);
      if (kind == "ws") return RadialWeight::ws(v);
    }
    throw UsageError("unknown weight '" + w + "'");
  }

 private:
  static const ConfigKey& find(const std::string& key) {
    for (const auto& k : config_keys())
      if (key == k.name) return k;
    throw UsageError("unknown config key '" + key + "'");
  }
  std::map<std::string, std::string> values_;
};

}  // namespace psrecon

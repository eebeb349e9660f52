#pragma once

#include <istream>
#include <limits>
#include <optional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "boundary.hpp"
#include "psmeasure.hpp"
#include "reconstruct.hpp"
#include "variance.hpp"

namespace psrecon {

namespace detail {

inline std::string coord_header(const Model& m) {
  if (m.kind() == ModelKind::PoincareDisk) return "re,im";
  std::string h;
  if (m.kind() == ModelKind::ComplexBall) {
    for (int k = 1; k <= m.dim(); ++k) h += (k > 1 ? "," : "") + ("re" + std::to_string(k)) + ",im" + std::to_string(k);
  } else {
    for (int k = 1; k <= m.dim(); ++k) h += (k > 1 ? ",x" : "x") + std::to_string(k);
  }
  return h;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (trim(s.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("not a number: '" + s + "'");
}

}  // namespace detail

/// Configuration CSV: '# key=value' metadata lines, a column header, then rows.
inline void write_configuration_csv(std::ostream& os, const Configuration& c) {
  os << "# model=" << c.model.name() << "\n";
  os << "# process=" << process_name(c.meta.process) << "\n";
  os << "# seed=" << c.meta.seed << "\n";
  if (c.meta.R) os << "# R=" << fmt17(*c.meta.R) << "\n";
  if (c.meta.r_edge) os << "# r_edge=" << fmt17(*c.meta.r_edge) << "\n";
  if (c.meta.lambda) os << "# lambda=" << fmt17(*c.meta.lambda) << "\n";
  if (c.meta.N) os << "# N=" << c.meta.N << "\n";
  os << detail::coord_header(c.model) << "\n";
  for (const auto& p : c.points) {
    for (int i = 0; i < p.n; ++i) os << (i ? "," : "") << fmt17(p.c[i]);
    os << "\n";
  }
}

inline Configuration read_configuration_csv(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  Configuration c;
  std::optional<Model> model;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq != std::string::npos) meta[detail::trim(line.substr(1, eq - 1))] = detail::trim(line.substr(eq + 1));
      continue;
    }
    if (!header) {
      header = true;
      if (!meta.count("model")) throw UsageError("configuration CSV lacks '# model=' line");
      model = Model::parse(meta["model"]);
      c.model = *model;
      c.meta.process = parse_process(meta.count("process") ? meta["process"] : "synthetic");
      if (meta.count("seed")) c.meta.seed = std::stoull(meta["seed"]);
      if (meta.count("R")) c.meta.R = detail::parse_double(meta["R"]);
      if (meta.count("r_edge")) c.meta.r_edge = detail::parse_double(meta["r_edge"]);
      if (meta.count("lambda")) c.meta.lambda = detail::parse_double(meta["lambda"]);
      if (meta.count("N")) c.meta.N = std::stoi(meta["N"]);
      continue;
    }
    std::vector<double> xs;
    for (const auto& f : detail::split(line, ',')) xs.push_back(detail::parse_double(f));
    c.points.push_back(make_point(*model, xs));
  }
  if (!model) throw UsageError("configuration CSV has no column header");
  return c;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "s,sigma,num_re,num_im,ratio_re,ratio_im,ref_re,ref_im,abs_err,tail_fraction\n";
  for (const auto& r : rows) {
    os << fmt17(r.s) << "," << fmt17(r.sigma) << "," << fmt17(r.numerator.real()) << "," << fmt17(r.numerator.imag())
       << "," << fmt17(r.ratio.real()) << "," << fmt17(r.ratio.imag()) << "," << fmt17(r.reference.real()) << ","
       << fmt17(r.reference.imag()) << "," << fmt17(r.abs_err) << "," << fmt17(r.tail_fraction) << "\n";
  }
}

inline void write_comparison_csv(std::ostream& os, const std::vector<cplx>& emp, const std::vector<cplx>& ref) {
  os << "n,emp_re,emp_im,ref_re,ref_im,abs_gap\n";
  for (std::size_t n = 0; n < emp.size(); ++n) {
    cplx r = n < ref.size() ? ref[n] : cplx(0);
    os << n << "," << fmt17(emp[n].real()) << "," << fmt17(emp[n].imag()) << "," << fmt17(r.real()) << ","
       << fmt17(r.imag()) << "," << fmt17(std::abs(emp[n] - r)) << "\n";
  }
}

inline void write_boundary_csv(std::ostream& os, const BoundaryFunction& g) {
  if (g.is_fourier()) {
    const auto& f = g.as_fourier();
    os << "n,re,im\n";
    for (int n = -f.n_max; n <= f.n_max; ++n)
      os << n << "," << fmt17(f.c[n + f.n_max].real()) << "," << fmt17(f.c[n + f.n_max].imag()) << "\n";
    return;
  }
  const auto& nd = g.as_nodes();
  const int dim = nd.rule->model().real_dim();
  for (int i = 0; i < dim; ++i) os << "c" << i + 1 << ",";
  os << "re,im\n";
  for (std::size_t k = 0; k < nd.v.size(); ++k) {
    for (int i = 0; i < dim; ++i) os << fmt17(nd.rule->nodes()[k].c[i]) << ",";
    os << fmt17(nd.v[k].real()) << "," << fmt17(nd.v[k].imag()) << "\n";
  }
}

/// Reads a Fourier-form boundary CSV (n, re, im).
inline BoundaryFunction read_boundary_fourier_csv(std::istream& is) {
  std::string line;
  std::map<int, cplx> terms;
  bool header = false;
  while (std::getline(is, line)) {
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    auto f = detail::split(line, ',');
    if (f.size() != 3) throw UsageError("boundary CSV rows need n,re,im");
    terms[std::stoi(f[0])] += cplx(detail::parse_double(f[1]), detail::parse_double(f[2]));
  }
  int n_max = 0;
  for (auto& [n, v] : terms) n_max = std::max(n_max, std::abs(n));
  std::vector<cplx> c(2 * n_max + 1);
  for (auto& [n, v] : terms) c[n + n_max] = v;
  return BoundaryFunction::fourier(n_max, std::move(c));
}

/// Flat JSON object with numbers printed at 17 significant digits.
class JsonObject {
 public:
  using Value = std::variant<double, long long, bool, std::string, std::vector<double>>;
  JsonObject& set(const std::string& k, Value v) {
    items_.emplace_back(k, std::move(v));
    return *this;
  }
  void write(std::ostream& os) const {
    os << "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      os << (i ? ", " : "") << quote(items_[i].first) << ": ";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              os << number(v);
            } else if constexpr (std::is_same_v<T, long long>) {
              os << v;
            } else if constexpr (std::is_same_v<T, bool>) {
              os << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::string>) {
              os << quote(v);
            } else {
              os << "[";
              for (std::size_t j = 0; j < v.size(); ++j) os << (j ? ", " : "") << number(v[j]);
              os << "]";
            }
          },
          items_[i].second);
    }
    os << "}\n";
  }

 private:
  static std::string number(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }
  static std::string quote(const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      o += c;
    }
    return o + "\"";
  }
  std::vector<std::pair<std::string, Value>> items_;
};

inline JsonObject to_json(const VarianceReport& r) {
  JsonObject j;
  if (r.closed_form)
    j.set("closed_form", *r.closed_form);
  else
    j.set("closed_form", std::numeric_limits<double>::quiet_NaN());
  j.set("mc_estimate", r.mc_estimate).set("mc_stderr", r.mc_stderr).set("n_reps", (long long)r.n_reps).set("pass", r.pass);
  return j;
}

inline JsonObject to_json(const ExponentFit& f) {
  JsonObject j;
  j.set("slope", f.slope).set("stderr", f.stderr_slope).set("window", std::vector<double>{f.window_lo, f.window_hi});
  j.set("residual", f.residual);
  return j;
}

}  // namespace psrecon

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <psrecon/psrecon.hpp>

using namespace psrecon;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = 0;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value configuration file");
    app->add_option("--seed", seed, "base seed (overrides the config)");
    app->add_option("--out", out, "output path, '-' for stdout");
    app->add_option("--threads", threads, "worker threads (0: PSRECON_THREADS or hardware)");
    app->add_option("--set", sets, "extra key=value override")->take_all();
  }

  RunConfig load() const {
    RunConfig c = config.empty() ? RunConfig{} : RunConfig::load(config);
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      c.set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
    }
    if (seed) c.set("seed", std::to_string(*seed));
    if (out) c.set("out", *out);
    return c;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot open output file " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

long reps(const RunConfig& c, long fallback) {
  return c.str("n_reps") == "auto" ? fallback : c.integer("n_reps");
}

std::vector<double> exponent_grid(const RunConfig& c, const Model& m) {
  std::string kind = c.str("schedule");
  int terms = int(c.integer("schedule_terms"));
  if (kind == "grid") return c.list("s_grid");
  std::optional<Schedule> sch;
  if (kind == "inverse-square") {
    sch = Schedule::inverse_square(m.entropy(), terms);
  } else if (kind == "log-slow") {
    if (m.kind() != ModelKind::PoincareDisk) throw UsageError("log-slow schedule is defined for the disk");
    sch = Schedule::log_slow(terms);
  } else {
    throw UsageError("unknown schedule '" + kind + "'");
  }
  std::vector<double> g;
  for (std::size_t i = 0; i < sch->size(); ++i) g.push_back(sch->value(i));
  return g;
}

TargetFunction target(const RunConfig& c, const Model& m) {
  std::string t = c.str("target");
  if (t == "constant") return TargetFunction::constant(1.0);
  std::vector<double> e1(m.real_dim(), 0.0);
  e1[0] = 1;
  if (t == "pole") return TargetFunction::kernel_pole(m, make_boundary(m, e1));
  if (t == "coordinate") return TargetFunction::coordinate(m);
  throw UsageError("unknown target '" + t + "'");
}

std::string stem_of(const std::string& path) {
  std::filesystem::path p(path);
  if (p.extension() == ".csv") p.replace_extension();
  return p.string();
}

int cmd_sample(const RunConfig& c) {
  Configuration conf = sample(c.sampler(), 0);
  Output out(c.str("out"));
  write_configuration_csv(out.stream(), conf);
  return 0;
}

int cmd_reconstruct(const RunConfig& c, unsigned threads) {
  SamplerSpec spec = c.sampler();
  Point z = c.point("z");
  TargetFunction f = target(c, spec.model);
  std::vector<double> grid = exponent_grid(c, spec.model);
  std::optional<double> lambda;
  if (spec.kind == ProcessKind::Poisson) lambda = spec.lambda;
  long n = reps(c, 1);
  if (n < 1) throw UsageError("n_reps must be positive");
  if (n == 1) {
    Output out(c.str("out"));
    write_trace_csv(out.stream(), run_trace(sample(spec, 0), z, grid, f, lambda));
    return 0;
  }
  std::string path = c.str("out");
  if (path == "-") throw UsageError("ensemble mode writes several files; set out to a path");
  std::string stem = stem_of(path);
  auto traces = parallel_map(
      std::size_t(n), [&](std::size_t i) { return run_trace(sample(spec, i), z, grid, f, lambda); }, threads);
  for (long i = 0; i < n; ++i) {
    char tag[32];
    std::snprintf(tag, sizeof tag, ".rep%05ld.csv", i);
    Output o(stem + tag);
    write_trace_csv(o.stream(), traces[i]);
  }
  Output agg(stem + ".aggregate.csv");
  std::ostream& os = agg.stream();
  os << "s,mean_ratio_re,mean_ratio_im,stderr_ratio,median_abs_err,ref_re,ref_im,tail_fraction,n_reps\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CompensatedSum<cplx> mean;
    std::vector<double> errs;
    for (const auto& t : traces) {
      mean.add(t[j].ratio);
      errs.push_back(t[j].abs_err);
    }
    cplx mu = mean.value() / double(n);
    CompensatedSum<double> var;
    for (const auto& t : traces) var.add(std::norm(t[j].ratio - mu));
    double se = std::sqrt(var.value() / double(n - 1) / double(n));
    std::sort(errs.begin(), errs.end());
    double med = n % 2 ? errs[n / 2] : 0.5 * (errs[n / 2 - 1] + errs[n / 2]);
    const TraceRow& r0 = traces[0][j];
    os << fmt17(r0.s) << "," << fmt17(mu.real()) << "," << fmt17(mu.imag()) << "," << fmt17(se) << "," << fmt17(med)
       << "," << fmt17(r0.reference.real()) << "," << fmt17(r0.reference.imag()) << "," << fmt17(r0.tail_fraction)
       << "," << n << "\n";
  }
  return 0;
}

ValueSpace parse_space(const std::string& s) {
  if (s == "scalar") return ValueSpace::Scalar;
  if (s == "hardy") return ValueSpace::Hardy;
  if (s == "boundary") return ValueSpace::Boundary;
  if (s == "bergman") return ValueSpace::Bergman;
  throw UsageError("unknown value space '" + s + "'");
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "s,variance,stderr,scaled\n";
  for (const auto& r : rows)
    os << fmt17(r.s) << "," << fmt17(r.variance) << "," << fmt17(r.stderr_v) << "," << fmt17(r.scaled) << "\n";
}

std::optional<double> variance_closed_form(const SamplerSpec& spec, const RadialWeight& W, const Point& z,
                                           ValueSpace space) {
  if (spec.kind == ProcessKind::GafZeros && space == ValueSpace::Hardy) return var_hardy_closed(W, z);
  if (spec.kind == ProcessKind::GafZeros && space == ValueSpace::Bergman) return var_bergman_closed(W, z);
  if (spec.kind == ProcessKind::Poisson && space == ValueSpace::Scalar) {
    if (W.is_constant()) return std::nullopt;
    QuadOptions o;
    o.abs_tol = 1e-300;
    double umin = 1 - W.rho_max() * W.rho_max();
    double v = adaptive_gl_breaks([&](double u) { return W.of_u(u) * W.of_u(u) / (u * u); }, umin, 1, W.u_breaks(), o)
                   .value;
    return spec.lambda * kPi * v;
  }
  return std::nullopt;
}

int cmd_variance(const RunConfig& c, unsigned threads) {
  SamplerSpec spec = c.sampler();
  Point z = c.point("z");
  std::string mode = c.str("variance_mode");
  Output out(c.str("out"));
  if (mode == "failure-scan") {
    std::ostream& os = out.stream();
    os << "weight,expected_sum,variance,ratio,bound\n";
    for (const auto& W : builtin_weights()) {
      double e = expected_weight_sum(W), v = var_bergman_closed(W, z);
      os << W.describe() << "," << fmt17(e) << "," << fmt17(v) << "," << fmt17(v / (e * e)) << ","
         << fmt17(kFailureBound) << "\n";
    }
    return 0;
  }
  long n = reps(c, 200);
  int n_max = int(c.integer("n_max"));
  if (mode == "up-exp-scan") {
    write_scan_csv(out.stream(), up_exp_scan(spec, z, c.list("s_grid"), n, spec.seed, n_max, threads));
    return 0;
  }
  if (mode != "report") throw UsageError("unknown variance_mode '" + mode + "'");
  RadialWeight W = c.weight();
  ValueSpace space = parse_space(c.str("space"));
  VarianceReport rep = mc_variance(spec, radial_statistic(W, z, space, n_max), n, spec.seed, threads);
  if (auto cf = variance_closed_form(spec, W, z, space)) rep.compare(*cf);
  to_json(rep).write(out.stream());
  if (!c.str("scan_out").empty()) {
    Output scan(c.str("scan_out"));
    write_scan_csv(scan.stream(), up_exp_scan(spec, z, c.list("s_grid"), n, spec.seed, n_max, threads));
  }
  return 0;
}

int cmd_psmeasure(const RunConfig& c, unsigned threads) {
  SamplerSpec spec = c.sampler();
  const Model& m = spec.model;
  long n = reps(c, 1);
  if (n < 1) throw UsageError("n_reps must be positive");
  Output out(c.str("out"));
  std::string report = c.str("report");
  if (report == "exponent") {
    auto fits = parallel_map(std::size_t(n), [&](std::size_t i) { return critical_exponent(sample(spec, i)); }, threads);
    ExponentFit f = fits[0];
    if (n > 1) {
      double mean = 0, ss = 0;
      for (const auto& x : fits) mean += x.slope;
      mean /= double(n);
      for (const auto& x : fits) ss += (x.slope - mean) * (x.slope - mean);
      f.slope = mean;
      f.stderr_slope = std::sqrt(ss / double(n - 1) / double(n));
      f.residual = 0;
      for (const auto& x : fits) f.residual += x.residual / double(n);
    }
    to_json(f).write(out.stream());
    return 0;
  }
  if (report != "comparison") throw UsageError("unknown report '" + report + "'");
  Point y = c.point("y");
  double s = c.str("s") == "auto" ? m.entropy() + 0.2 : c.num("s");
  int n_max = int(c.integer("n_max"));
  std::string ext_name = c.str("extension");
  if (ext_name != "radial" && ext_name != "harmonic") throw UsageError("unknown extension '" + ext_name + "'");
  Extension ext = ext_name == "harmonic" ? Extension::Harmonic : Extension::Radial;
  std::vector<cplx> emp, ref;
  if (m.kind() == ModelKind::PoincareDisk) {
    auto per = parallel_map(
        std::size_t(n), [&](std::size_t i) { return fourier_coeffs(normalize(ps_empirical(sample(spec, i), y, s)), n_max, ext); },
        threads);
    emp.assign(n_max + 1, 0.0);
    for (int k = 0; k <= n_max; ++k) {
      CompensatedSum<cplx> a;
      for (const auto& v : per) a.add(v[k]);
      emp[k] = a.value() / double(n);
    }
    ref = harmonic_measure_coeffs(y, n_max);
  } else {
    auto per = parallel_map(
        std::size_t(n), [&](std::size_t i) { return sphere_moments(normalize(ps_empirical(sample(spec, i), y, s))); },
        threads);
    auto flat = [](const SphereMoments& sm) {
      std::vector<double> v = sm.first;
      v.insert(v.end(), sm.second.begin(), sm.second.end());
      return v;
    };
    std::vector<double> r = flat(conformal_moments(m, y, QuadratureRule::standard(m, 4096, 1)));
    for (std::size_t k = 0; k < r.size(); ++k) {
      CompensatedSum<double> a;
      for (const auto& v : per) a.add(flat(v)[k]);
      emp.push_back(a.value() / double(n));
      ref.push_back(r[k]);
    }
  }
  write_comparison_csv(out.stream(), emp, ref);
  return 0;
}

int cmd_verify(const std::string& filter, double perturb, unsigned threads) {
  auto rows = run_checks(verification_checks(), filter, perturb, threads);
  if (rows.empty()) throw UsageError("no verification check matches '" + filter + "'");
  print_check_table(std::cout, rows);
  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.outcome.pass;
  std::cout << passed << "/" << rows.size() << " checks passed\n";
  return passed == rows.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction and Patterson-Sullivan experiments on hyperbolic point processes"};
  app.require_subcommand(1);

  Common common;
  std::string filter;
  double perturb = 0;
  auto* verify = app.add_subcommand("verify", "run the deterministic verification suite");
  verify->add_option("--filter", filter, "group or name substring to run");
  verify->add_option("--threads", common.threads, "worker threads");
  verify->add_option("--perturb", perturb, "relative perturbation of closed-form constants")->group("");

  auto* sample_cmd = app.add_subcommand("sample", "write one sampled configuration");
  auto* recon = app.add_subcommand("reconstruct", "write a reconstruction trace");
  auto* var = app.add_subcommand("variance", "Monte Carlo variance report or scans");
  auto* ps = app.add_subcommand("psmeasure", "Patterson-Sullivan comparison or exponent report");
  for (auto* sc : {sample_cmd, recon, var, ps}) common.attach(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(filter, perturb, common.threads);
    RunConfig cfg = common.load();
    if (*sample_cmd) return cmd_sample(cfg);
    if (*recon) return cmd_reconstruct(cfg, common.threads);
    if (*var) return cmd_variance(cfg, common.threads);
    return cmd_psmeasure(cfg, common.threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved " << fmt17(e.achieved()) << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

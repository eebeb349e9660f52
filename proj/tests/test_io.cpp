#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>
#include <psrecon/config.hpp>

using namespace psrecon;

TEST(Fmt17, RoundTripsExactly) {
  Rng rng = make_rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    double v = u(rng) * std::pow(10.0, i % 20 - 10);
    EXPECT_EQ(std::stod(fmt17(v)), v);
  }
  EXPECT_EQ(fmt17(0.5), "0.5");
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
}

TEST(ConfigurationCsv, RoundTripAllModels) {
  std::vector<Configuration> confs = {sample_poisson(Model::disk(), 1.5, 4, 7), sample_gaf_zeros(64, 0.8, 3),
                                      sample_poisson(Model::complex_ball(2), 1, 3, 2),
                                      sample_poisson(Model::real_ball(4), 1, 2.5, 9)};
  for (const auto& c : confs) {
    std::stringstream ss;
    write_configuration_csv(ss, c);
    auto back = read_configuration_csv(ss);
    EXPECT_EQ(back.model.name(), c.model.name());
    EXPECT_EQ(back.meta.process, c.meta.process);
    EXPECT_EQ(back.meta.seed, c.meta.seed);
    EXPECT_EQ(back.meta.R, c.meta.R);
    EXPECT_EQ(back.meta.r_edge, c.meta.r_edge);
    EXPECT_EQ(back.meta.lambda, c.meta.lambda);
    EXPECT_EQ(back.meta.N, c.meta.N);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back.points[i].c, c.points[i].c);
    std::stringstream again;
    write_configuration_csv(again, back);
    std::stringstream first;
    write_configuration_csv(first, c);
    EXPECT_EQ(again.str(), first.str());
  }
}

TEST(ConfigurationCsv, HeadersAndErrors) {
  auto hdr = [](const Model& m) {
    std::stringstream ss;
    write_configuration_csv(ss, make_configuration(m, {}));
    std::string line, last;
    while (std::getline(ss, line)) last = line;
    return last;
  };
  EXPECT_EQ(hdr(Model::disk()), "re,im");
  EXPECT_EQ(hdr(Model::complex_ball(2)), "re1,im1,re2,im2");
  EXPECT_EQ(hdr(Model::real_ball(3)), "x1,x2,x3");
  std::stringstream no_model("re,im\n0.1,0.2\n");
  EXPECT_THROW(read_configuration_csv(no_model), UsageError);
  std::stringstream bad("# model=disk\nre,im\n0.1,abc\n");
  EXPECT_THROW(read_configuration_csv(bad), UsageError);
  std::stringstream outside("# model=disk\nre,im\n0.9,0.9\n");
  EXPECT_THROW(read_configuration_csv(outside), DomainError);
  std::stringstream empty("");
  EXPECT_THROW(read_configuration_csv(empty), UsageError);
  std::stringstream synthetic("# model=real:3\nx1,x2,x3\n0.1,0,0\n");
  auto c = read_configuration_csv(synthetic);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_FALSE(c.meta.R.has_value());
}

TEST(TraceCsv, SchemaAndValues) {
  TraceRow r;
  r.s = 1.5;
  r.sigma = 2;
  r.numerator = {1, -1};
  r.ratio = {0.5, -0.5};
  r.reference = {0.5, 0};
  r.abs_err = 0.5;
  r.tail_fraction = 0.01;
  std::stringstream ss;
  write_trace_csv(ss, {r});
  EXPECT_EQ(ss.str(),
            "s,sigma,num_re,num_im,ratio_re,ratio_im,ref_re,ref_im,abs_err,tail_fraction\n"
            "1.5,2,1,-1,0.5,-0.5,0.5,0,0.5,0.01\n");
}

TEST(ComparisonCsv, GapColumn) {
  std::stringstream ss;
  write_comparison_csv(ss, {1, {0.3, 0.4}}, {1});
  EXPECT_EQ(ss.str(), "n,emp_re,emp_im,ref_re,ref_im,abs_gap\n0,1,0,1,0,0\n1,0.29999999999999999,0.40000000000000002,0,0,0.5\n");
}

TEST(BoundaryCsv, FourierRoundTripAndNodeLayout) {
  auto g = BoundaryFunction::trig({{-2, {0.5, 1}}, {0, 3}, {1, {0, -0.25}}});
  std::stringstream ss;
  write_boundary_csv(ss, g);
  auto back = read_boundary_fourier_csv(ss);
  for (double t : {0.0, 1.0, 2.5}) EXPECT_EQ(back(disk_boundary(t)), g(disk_boundary(t)));
  std::stringstream bad("n,re,im\n1,2\n");
  EXPECT_THROW(read_boundary_fourier_csv(bad), UsageError);

  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(Model::real_ball(3), 4, 1));
  auto h = BoundaryFunction::nodes(rule, {1, 2, 3, {4, 1}});
  std::stringstream ns;
  write_boundary_csv(ns, h);
  std::string head;
  std::getline(ns, head);
  EXPECT_EQ(head, "c1,c2,c3,re,im");
  int rows = 0;
  for (std::string line; std::getline(ns, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Json, ParsesWithAStandardReader) {
  VarianceReport r;
  r.closed_form = 0.32;
  r.mc_estimate = 0.31;
  r.mc_stderr = 0.01;
  r.n_reps = 200;
  r.pass = true;
  std::stringstream ss;
  to_json(r).write(ss);
  auto j = nlohmann::json::parse(ss.str());
  EXPECT_EQ(j["closed_form"].get<double>(), 0.32);
  EXPECT_EQ(j["n_reps"].get<int>(), 200);
  EXPECT_TRUE(j["pass"].get<bool>());
  r.closed_form.reset();
  std::stringstream none;
  to_json(r).write(none);
  EXPECT_TRUE(nlohmann::json::parse(none.str())["closed_form"].is_null());

  ExponentFit f{1.01, 0.02, 0.03, 4, 11};
  std::stringstream fs;
  to_json(f).write(fs);
  auto e = nlohmann::json::parse(fs.str());
  EXPECT_EQ(e["slope"].get<double>(), 1.01);
  EXPECT_EQ(e["window"][1].get<double>(), 11);
  JsonObject q;
  q.set("label", std::string("a\"b\\c"));
  std::stringstream qs;
  q.write(qs);
  EXPECT_EQ(nlohmann::json::parse(qs.str())["label"].get<std::string>(), "a\"b\\c");
}

TEST(RunConfig, ParsingDefaultsAndErrors) {
  std::stringstream ss("# comment\nmodel = complex:2\nR = 6.5  # trailing\nseed=42\nz = 0.1,0,0,0.2\n\n");
  auto c = RunConfig::parse(ss);
  EXPECT_EQ(c.model().name(), Model::complex_ball(2).name());
  EXPECT_EQ(c.num("R"), 6.5);
  EXPECT_EQ(c.u64("seed"), 42u);
  EXPECT_EQ(c.str("process"), "poisson");
  EXPECT_EQ(c.list("s_grid").size(), 6u);
  auto z = c.point("z");
  EXPECT_EQ(z.c[0], 0.1);
  EXPECT_EQ(z.c[3], 0.2);
  EXPECT_EQ(c.point("y").norm2(), 0.0);
  auto spec = c.sampler();
  EXPECT_EQ(spec.R, 6.5);
  EXPECT_EQ(spec.seed, 42u);

  std::stringstream unknown("colour = blue\n");
  EXPECT_THROW(RunConfig::parse(unknown), UsageError);
  std::stringstream noeq("model disk\n");
  EXPECT_THROW(RunConfig::parse(noeq), UsageError);
  RunConfig d;
  d.set("N", "3.5");
  EXPECT_THROW(d.integer("N"), UsageError);
  d.set("seed", "-1");
  EXPECT_THROW(d.u64("seed"), UsageError);
  d.set("lambda", "x");
  EXPECT_THROW(d.num("lambda"), UsageError);
  d.set("process", "binomial");
  EXPECT_THROW(d.sampler(), UsageError);
  d.set("process", "gaf");
  d.set("N", "256");
  d.set("lambda", "1");
  d.set("seed", "1");
  d.set("model", "real:3");
  EXPECT_THROW(d.sampler(), UsageError);
  EXPECT_THROW(RunConfig::load("/nonexistent/run.cfg"), UsageError);
}

TEST(RunConfig, Weights) {
  EXPECT_EQ(RunConfig::parse_weight("indicator:0.5").describe(), RadialWeight::indicator(0.5).describe());
  EXPECT_EQ(RunConfig::parse_weight("ws:1.5").describe(), RadialWeight::ws(1.5).describe());
  EXPECT_EQ(RunConfig::parse_weight("constant").describe(), RadialWeight::constant(1).describe());
  EXPECT_THROW(RunConfig::parse_weight("gauss:1"), UsageError);
  EXPECT_THROW(RunConfig::parse_weight("indicator:2"), UsageError);
  RunConfig c;
  EXPECT_EQ(c.weight().describe(), RadialWeight::indicator(0.5).describe());
  for (const auto& k : config_keys()) EXPECT_NO_THROW(c.str(k.name));
}

#include <gtest/gtest.h>

#include <psrecon/boundary.hpp>

#include "oracles.hpp"

using namespace psrecon;

namespace {

double mc_stderr(const std::vector<double>& v) {
  double m = 0, q = 0;
  for (double x : v) m += x;
  m /= v.size();
  for (double x : v) q += (x - m) * (x - m);
  return std::sqrt(q / (v.size() - 1) / v.size());
}

}  // namespace

TEST(QuadratureRule, CircleExactOnTrigMonomials) {
  for (int n : {1, 7, 64, 257}) {
    auto q = QuadratureRule::circle(n);
    double wsum = 0;
    for (double w : q.weights()) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    for (int k = 1; k < n; ++k) {
      cplx s = 0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        cplx e(q.nodes()[i].c[0], q.nodes()[i].c[1]);
        s += q.weights()[i] * std::pow(e, k);
      }
      EXPECT_LT(std::abs(s), 1e-13) << "n=" << n << " k=" << k;
    }
  }
  EXPECT_THROW(QuadratureRule::circle(0), UsageError);
}

TEST(QuadratureRule, SphereNodesAreUnitAndCentered) {
  for (Model m : {Model::complex_ball(2), Model::real_ball(3), Model::real_ball(6)}) {
    auto q = QuadratureRule::sphere_mc(m, 4096, 3);
    double wsum = 0;
    std::vector<double> first;
    for (std::size_t i = 0; i < q.size(); ++i) {
      wsum += q.weights()[i];
      EXPECT_NEAR(q.nodes()[i].norm2(), 1.0, 1e-14);
      first.push_back(q.nodes()[i].c[0]);
    }
    EXPECT_NEAR(wsum, 1.0, 1e-12);
    double mean = 0;
    for (double x : first) mean += x;
    mean /= first.size();
    EXPECT_LE(std::abs(mean), 4 * mc_stderr(first)) << m.name();
    auto again = QuadratureRule::sphere_mc(m, 4096, 3);
    EXPECT_EQ(again.nodes()[17].c, q.nodes()[17].c);
  }
  EXPECT_TRUE(QuadratureRule::standard(Model::disk(), 16, 1).is_circle());
  EXPECT_FALSE(QuadratureRule::standard(Model::real_ball(3), 16, 1).is_circle());
}

TEST(BoundaryFunction, RepresentationAndValidation) {
  auto g = BoundaryFunction::trig({{1, 1.0}, {-1, 1.0}, {0, 2.0}});
  EXPECT_EQ(g.as_fourier().n_max, 1);
  EXPECT_EQ(g.coeff(1), g.coeff(-1));
  EXPECT_EQ(g.coeff(5), cplx(0));
  EXPECT_NEAR(std::abs(g(disk_boundary(0.7)) - (2 + 2 * std::cos(0.7))), 0.0, 1e-15);
  EXPECT_THROW(BoundaryFunction::fourier(2, std::vector<cplx>(4)), UsageError);
  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(Model::real_ball(3), 32, 1));
  EXPECT_THROW(BoundaryFunction::nodes(rule, std::vector<cplx>(31)), UsageError);
  auto h = BoundaryFunction::sample(rule, [](const BoundaryPoint& xi) { return xi.c[2]; });
  EXPECT_EQ(h(rule->nodes()[5]), cplx(rule->nodes()[5].c[2]));
  EXPECT_THROW(h(make_boundary(Model::real_ball(3), {1, 0, 0})), UsageError);
  EXPECT_EQ(h.model(), Model::real_ball(3));
}

TEST(PoissonExtend, Examples) {
  auto one = BoundaryFunction::trig({{0, 1.0}});
  auto zeta = BoundaryFunction::trig({{1, 1.0}});
  EXPECT_NEAR(std::abs(poisson_extend(one, disk_point({0.7, -0.6})) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(poisson_extend(zeta, disk_point(0.3)) - 0.3), 0.0, 1e-16);
  auto g = BoundaryFunction::trig({{0, 0.25}, {2, {1, 2}}, {-3, 0.5}});
  EXPECT_EQ(poisson_extend(g, origin(Model::disk())), cplx(0.25));
  auto rule = QuadratureRule::circle(8);
  EXPECT_NO_THROW(poisson_extend(g, disk_point(0.1), rule));
  EXPECT_THROW(poisson_extend(g, disk_point(0.1), QuadratureRule::sphere_mc(Model::real_ball(2), 8, 1)),
               UsageError);
}

TEST(PoissonExtend, FourierMatchesKernelIntegral) {
  auto g = BoundaryFunction::trig({{0, 0.5}, {1, {0.2, -0.1}}, {-1, {0.3, 0.4}}, {4, {-1, 0.5}}, {-5, 0.7}});
  for (oracle::cplx x : {oracle::cplx(0.3, 0.2), oracle::cplx(-0.8, 0.1), oracle::cplx(0, -0.95)}) {
    auto kernel = [x](double t) {
      return (1 - std::norm(x)) / std::norm(std::polar(1.0, t) - x);
    };
    auto ref = oracle::circle_mean_c([&](double t) { return kernel(t) * g(disk_boundary(t)); });
    EXPECT_NEAR(std::abs(poisson_extend(g, disk_point(x)) - ref), 0.0, 1e-12);
  }
}

TEST(PoissonExtend, NodeFormAgreesWithFourierOnTheCircle) {
  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::circle(512));
  auto g = BoundaryFunction::trig({{0, 1.0}, {3, {0, 1}}, {-2, 0.5}});
  auto gn = BoundaryFunction::sample(rule, [&](const BoundaryPoint& xi) { return g(xi); });
  Point x = disk_point({0.4, -0.5});
  EXPECT_NEAR(std::abs(poisson_extend(gn, x) - poisson_extend(g, x)), 0.0, 1e-13);
}

TEST(PoissonExtend, ConstantOnSpheresWithinMonteCarloError) {
  for (Model m : {Model::complex_ball(2), Model::real_ball(3)}) {
    auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(m, 4096, 2));
    auto one = BoundaryFunction::sample(rule, [](const BoundaryPoint&) { return 1.0; });
    Point x = origin(m);
    x.c[0] = 0.3;
    std::vector<double> k;
    for (const auto& xi : rule->nodes()) k.push_back(poisson_kernel(m, x, xi));
    EXPECT_LE(std::abs(poisson_extend(one, x) - 1.0), 4 * mc_stderr(k)) << m.name();
    EXPECT_NEAR(std::abs(poisson_extend(one, origin(m)) - 1.0), 0.0, 1e-13);
  }
}

TEST(L2Inner, Examples) {
  auto one = BoundaryFunction::trig({{0, 1.0}});
  auto zeta = BoundaryFunction::trig({{1, 1.0}});
  EXPECT_EQ(l2_inner(one, one), cplx(1));
  EXPECT_EQ(l2_inner(zeta, zeta), cplx(1));
  EXPECT_EQ(l2_inner(zeta, one), cplx(0));
  auto p = poisson_kernel_vector(disk_point(0.5), 64).as_boundary_function();
  EXPECT_NEAR(l2_inner(p, p).real(), 5.0 / 3.0, 1e-15);
  auto f = BoundaryFunction::trig({{1, {1, 2}}, {-2, 0.5}});
  auto g = BoundaryFunction::trig({{1, {0, 1}}, {-2, {3, -1}}, {0, 1.0}});
  EXPECT_EQ(l2_inner(f, g), std::conj(l2_inner(g, f)));
  EXPECT_GT(l2_inner(f, f).real(), 0);
  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(Model::real_ball(3), 16, 1));
  auto other = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(Model::real_ball(3), 16, 2));
  auto a = BoundaryFunction::sample(rule, [](const BoundaryPoint&) { return 1.0; });
  auto b = BoundaryFunction::sample(other, [](const BoundaryPoint&) { return 1.0; });
  EXPECT_NEAR(l2_inner(a, a).real(), 1.0, 1e-15);
  EXPECT_THROW(l2_inner(a, b), UsageError);
}

TEST(L2Inner, PairingWithKernelVectorIsPoissonExtension) {
  auto g = BoundaryFunction::trig({{0, 0.5}, {2, {1, -1}}, {-1, 0.25}});
  Point x = disk_point({-0.2, 0.6});
  auto p = poisson_kernel_vector(x, 64).as_boundary_function();
  EXPECT_NEAR(std::abs(l2_inner(g, p) - poisson_extend(g, x)), 0.0, 1e-15);

  Model m = Model::real_ball(3);
  auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::sphere_mc(m, 512, 4));
  auto gn = BoundaryFunction::sample(rule, [](const BoundaryPoint& xi) { return 1 + xi.c[1]; });
  Point y = make_point(m, {0.1, 0.3, -0.2});
  auto py = poisson_kernel_vector(y, rule).as_boundary_function();
  EXPECT_NEAR(std::abs(l2_inner(gn, py) - poisson_extend(gn, y)), 0.0, 1e-13);
}

TEST(KernelNorm, DiskClosedFormAndBound) {
  auto rule = QuadratureRule::circle(256);
  Model d = Model::disk();
  EXPECT_NEAR(kernel_l2_norm_sq(d, origin(d), rule), 1.0, 1e-15);
  double v = kernel_l2_norm_sq(d, disk_point(0.5), rule);
  EXPECT_NEAR(v, 5.0 / 3.0, 1e-13);
  EXPECT_LE(v, std::exp(dist(d, origin(d), disk_point(0.5))));
  for (double r : {0.1, 0.6, 0.9}) {
    double ref = oracle::circle_mean([r](double t) {
      double p = (1 - r * r) / std::norm(std::polar(1.0, t) - r);
      return p * p;
    });
    EXPECT_NEAR(kernel_l2_norm_sq(d, disk_point(r), QuadratureRule::circle(1024)), ref, 1e-12 * ref);
  }
  EXPECT_THROW(kernel_l2_norm_sq(Model::real_ball(3), origin(Model::real_ball(3)), rule), UsageError);
}

TEST(KernelNorm, SpheresMatchAxialOracles) {
  const double r = 0.6;
  // Real ball m = 3: the normalized measure of u = <xi, e1> is du/2 on [-1, 1].
  double real_ref = 0.5 * oracle::integrate(
                              [r](double u) {
                                double p = (1 - r * r) / (1 + r * r - 2 * r * u);
                                return std::pow(p, 4);
                              },
                              -1, 1);
  // Complex ball d = 2: |xi_1|^2 is uniform on [0, 1] with an independent uniform phase.
  double complex_ref = oracle::integrate(
      [r](double q) {
        return oracle::circle_mean([&](double t) {
          double p = (1 - r * r) / std::norm(1.0 - r * std::sqrt(q) * std::polar(1.0, t));
          return std::pow(p, 4);
        });
      },
      0, 1, 1e-11);
  struct Case {
    Model m;
    double ref;
  };
  for (const Case& c : {Case{Model::real_ball(3), real_ref}, Case{Model::complex_ball(2), complex_ref}}) {
    auto rule = QuadratureRule::sphere_mc(c.m, 20000, 8);
    Point x = origin(c.m);
    x.c[0] = r;
    std::vector<double> sq;
    for (const auto& xi : rule.nodes()) sq.push_back(std::pow(poisson_kernel(c.m, x, xi), 2));
    double v = kernel_l2_norm_sq(c.m, x, rule);
    EXPECT_LE(std::abs(v - c.ref), 4 * mc_stderr(sq)) << c.m.name();
    double growth = kernel_growth_constant(c.m, x, rule);
    EXPECT_NEAR(growth, v * std::exp(-c.m.entropy() * dist(c.m, origin(c.m), x)), 1e-12 * growth);
  }
}

TEST(KernelVector, NormsIncreaseToClosedForms) {
  for (double r : {0.3, 0.7, 0.9}) {
    Point x = disk_point(std::polar(r, 1.1));
    double pb = 0, sz = 0, bg = 0;
    for (int n = 4; n <= 512; n *= 2) {
      double a = poisson_kernel_vector(x, n).norm2();
      double b = szego_vector(x, n).norm2();
      double c = bergman_vector(x, n).norm2();
      EXPECT_GE(a, pb);
      EXPECT_GE(b, sz);
      EXPECT_GE(c, bg);
      if (std::pow(r, n) > 1e-6) {
        EXPECT_GT(a, pb);
      }
      pb = a;
      sz = b;
      bg = c;
    }
    EXPECT_NEAR(pb, (1 + r * r) / (1 - r * r), 1e-12);
    EXPECT_NEAR(sz, 1 / (1 - r * r), 1e-12);
    EXPECT_NEAR(bg, 1 / (kPi * (1 - r * r) * (1 - r * r)), 1e-10);
  }
}

TEST(KernelVector, HolomorphicVectorsReproduceKernels) {
  oracle::cplx x(0.3, -0.4), z(-0.2, 0.5);
  auto s = szego_vector(disk_point(x), 128);
  auto k = bergman_vector(disk_point(x), 128);
  cplx sz = 0, kz = 0, p = 1;
  for (int n = 0; n <= 128; ++n) {
    sz += s.v[n] * p;
    kz += k.v[n] * std::sqrt((n + 1) / kPi) * p;
    p *= z;
  }
  EXPECT_NEAR(std::abs(sz - oracle::szego(z, x)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(kz - oracle::bergman(z, x)), 0.0, 1e-14);
  EXPECT_THROW(s.as_boundary_function(), UsageError);
}

TEST(Mvp, DiskIsExactUpToQuadrature) {
  Model d = Model::disk();
  EXPECT_LE(mvp_residual(d, origin(d), disk_boundary(0), 1.0).residual, 1e-6);
  EXPECT_LE(mvp_residual(d, disk_point({0.3, 0.2}), disk_boundary(2.0), 1.5).residual, 1e-6);
  auto constant = ball_average(d, disk_point(0.5), 2.0, [](const Point&) { return 1.0; });
  EXPECT_NEAR(constant.residual, 0.0, 1e-14);
  EXPECT_THROW(mvp_residual(d, origin(d), disk_boundary(0), 0.0), UsageError);
}

TEST(Mvp, SpheresWithinFourStandardErrors) {
  Model c2 = Model::complex_ball(2);
  auto res = mvp_residual(c2, make_point(c2, {0.2, 0, 0, 0}), make_boundary(c2, {1, 0, 0, 0}), 0.8);
  EXPECT_GT(res.std_error, 0);
  EXPECT_LE(res.residual, 4 * res.std_error);
  MvpQuadrature fine;
  fine.mc_directions = 1 << 16;
  auto res_fine = mvp_residual(c2, make_point(c2, {0.2, 0, 0, 0}), make_boundary(c2, {1, 0, 0, 0}), 0.8, fine);
  EXPECT_LE(res_fine.residual, 4 * res_fine.std_error);
  EXPECT_LT(res_fine.std_error, res.std_error / 3);
  Model r3 = Model::real_ball(3);
  auto res3 = mvp_residual(r3, make_point(r3, {0.1, -0.2, 0.3}), make_boundary(r3, {0, 0.6, 0.8}), 1.0);
  EXPECT_LE(res3.residual, 4 * res3.std_error);
}

TEST(Mvp, RadialWeightAgainstTranslatedHarmonicFunction) {
  auto g = BoundaryFunction::trig(
      {{0, 0.3}, {1, {1, -0.5}}, {-2, 0.7}, {3, {0, 0.4}}, {-4, {-0.2, 0.1}}, {5, 0.6}, {-5, {0.1, 0.1}}});
  auto nu = [](double r) { return r < 0.6 ? (0.36 - r * r) * (0.36 - r * r) : 0.0; };
  double mass = oracle::disk_integral([&](oracle::cplx x) { return nu(std::abs(x)); }, {}, 0.6);
  for (oracle::cplx z : {oracle::cplx(0.2, 0.1), oracle::cplx(-0.7, 0.5)}) {
    auto phi = [z](oracle::cplx x) { return (z - x) / (1.0 - std::conj(z) * x); };
    cplx uz = poisson_extend(g, disk_point(z));
    for (int part = 0; part < 2; ++part) {
      double lhs = oracle::disk_integral(
          [&](oracle::cplx x) {
            cplx u = poisson_extend(g, disk_point(phi(x)));
            return (part == 0 ? u.real() : u.imag()) * nu(std::abs(x));
          },
          {}, 0.6);
      double rhs = (part == 0 ? uz.real() : uz.imag()) * mass;
      EXPECT_NEAR(lhs, rhs, 1e-6 * std::abs(uz) * mass);
    }
  }
}

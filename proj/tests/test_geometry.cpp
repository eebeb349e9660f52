#include <gtest/gtest.h>

#include <psrecon/geometry.hpp>
#include <psrecon/rng.hpp>

#include "oracles.hpp"

using namespace psrecon;

namespace {

std::vector<Model> all_models() {
  return {Model::disk(), Model::complex_ball(2), Model::complex_ball(3), Model::real_ball(2), Model::real_ball(3),
          Model::real_ball(5)};
}

Point random_point(const Model& m, Rng& rng, double max_norm = 0.95) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(m.real_dim());
  double n = 0;
  for (double& x : v) {
    x = g(rng);
    n += x * x;
  }
  double r = max_norm * std::pow(u(rng), 1.0 / m.real_dim());
  for (double& x : v) x *= r / std::sqrt(n);
  return make_point(m, v);
}

BoundaryPoint random_boundary(const Model& m, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(m.real_dim());
  double n = 0;
  for (double& x : v) {
    x = g(rng);
    n += x * x;
  }
  for (double& x : v) x /= std::sqrt(n);
  return make_boundary(m, v);
}

std::vector<oracle::cplx> as_complex(const Point& p) {
  std::vector<oracle::cplx> z;
  for (int k = 0; k < p.n / 2; ++k) z.push_back(p.z(k));
  return z;
}

std::vector<double> as_real(const Coords& p) { return std::vector<double>(p.c.begin(), p.c.begin() + p.n); }

/// Rudin's automorphism phi_w(z) = (w - P z - s Q z) / (1 - <z, w>).
std::vector<oracle::cplx> rudin_phi(const std::vector<oracle::cplx>& w, const std::vector<oracle::cplx>& z) {
  oracle::cplx zw = 0;
  double nw = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    zw += z[i] * std::conj(w[i]);
    nw += std::norm(w[i]);
  }
  std::vector<oracle::cplx> out(w.size());
  double s = std::sqrt(1 - nw);
  for (std::size_t i = 0; i < w.size(); ++i) {
    oracle::cplx pz = nw == 0 ? 0.0 : zw / nw * w[i];
    out[i] = (w[i] - pz - s * (z[i] - pz)) / (1.0 - zw);
  }
  return out;
}

}  // namespace

TEST(Model, EntropyAndDimensions) {
  EXPECT_EQ(Model::disk().entropy(), 1);
  EXPECT_EQ(Model::complex_ball(3).entropy(), 3);
  EXPECT_EQ(Model::real_ball(4).entropy(), 3);
  EXPECT_EQ(Model::complex_ball(2).density_exponent(), 3);
  EXPECT_EQ(Model::real_ball(3).density_exponent(), 3);
  EXPECT_EQ(Model::parse("complex:2"), Model::complex_ball(2));
  EXPECT_EQ(Model::parse("real:7").name(), "real:7");
  EXPECT_THROW(Model::complex_ball(5), UsageError);
  EXPECT_THROW(Model::real_ball(1), UsageError);
  EXPECT_THROW(Model::parse("sphere:2"), UsageError);
}

TEST(Dist, SpotValues) {
  Model d = Model::disk();
  EXPECT_NEAR(dist(d, origin(d), disk_point(0.5)), std::log(3.0), 1e-15);
  Point x = disk_point({0.3, 0.0}), y = disk_point({0.0, 0.5});
  double v = dist(d, x, y);
  EXPECT_NEAR(v, oracle::disk_geodesic_length({0.3, 0.0}, {0.0, 0.5}), 1e-12);
  EXPECT_NEAR(v, oracle::disk_dist({0.3, 0.0}, {0.0, 0.5}), 1e-12);
  EXPECT_NEAR(v, 1.3150, 5e-4);
  for (const auto& m : all_models()) {
    Rng rng = make_rng(3);
    Point p = random_point(m, rng);
    EXPECT_EQ(dist(m, p, p), 0.0);
  }
}

TEST(Dist, MatchesArccoshFormulas) {
  Rng rng = make_rng(11);
  for (const auto& m : all_models()) {
    for (int i = 0; i < 200; ++i) {
      Point x = random_point(m, rng, 0.9), y = random_point(m, rng, 0.9);
      double ref = m.kind() == ModelKind::RealBall ? oracle::real_dist(as_real(x), as_real(y))
                                                   : oracle::complex_dist(as_complex(x), as_complex(y));
      EXPECT_NEAR(dist(m, x, y), ref, 1e-9 * std::max(1.0, ref)) << m.name();
    }
  }
}

TEST(Dist, RejectsBadInput) {
  Model d = Model::disk();
  EXPECT_THROW(disk_point({1.0, 0.0}), DomainError);
  Point p = origin(Model::complex_ball(2));
  EXPECT_THROW(dist(d, origin(d), p), UsageError);
}

TEST(Involution, Examples) {
  Model c2 = Model::complex_ball(2);
  Point w = complex_point(c2, {{0.3, 0.1}, {-0.2, 0.4}});
  Point z = complex_point(c2, {{0.1, -0.5}, {0.2, 0.2}});
  Point a = involution(c2, w, origin(c2));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a.c[i], w.c[i], 1e-15);
  Point b = involution(c2, origin(c2), z);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(b.c[i], -z.c[i], 1e-15);
  EXPECT_LT(involution(c2, w, w).norm(), 1e-15);
  auto ref = rudin_phi(as_complex(w), as_complex(z));
  Point got = involution(c2, w, z);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(got.z(k) - ref[k]), 0.0, 1e-14);
}

TEST(Involution, RealBallExample) {
  Model r3 = Model::real_ball(3);
  Point a = make_point(r3, {0.2, 0, 0}), x = make_point(r3, {0, 0.3, 0});
  // psi_a(x) = (a|x - a|^2 + (1 - |a|^2)(a - x)) / [x, a]^2, in long double.
  long double ax[3] = {0.2L, 0, 0}, xx[3] = {0, 0.3L, 0}, e = 0, na = 0.04L, nx = 0.09L, dot = 0;
  for (int i = 0; i < 3; ++i) {
    e += (xx[i] - ax[i]) * (xx[i] - ax[i]);
    dot += xx[i] * ax[i];
  }
  long double den = 1 - 2 * dot + nx * na;
  Point y = involution(r3, a, x);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(y.c[i], double((ax[i] * e + (1 - na) * (ax[i] - xx[i])) / den), 1e-16);
  Point back = involution(r3, a, y);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(back.c[i], x.c[i], 1e-15);
  EXPECT_LT(involution(r3, a, a).norm(), 1e-16);
  Point at0 = involution(r3, a, origin(r3));
  EXPECT_NEAR(at0.c[0], 0.2, 1e-16);
}

TEST(Involution, PropertiesOnRandomPoints) {
  Rng rng = make_rng(5);
  for (const auto& m : all_models()) {
    double worst_sq = 0, worst_iso = 0;
    for (int i = 0; i < 1000; ++i) {
      Point w = random_point(m, rng), x = random_point(m, rng), y = random_point(m, rng);
      Point xx = involution(m, w, involution(m, w, x));
      for (int k = 0; k < m.real_dim(); ++k) worst_sq = std::max(worst_sq, std::abs(xx.c[k] - x.c[k]));
      double d = dist(m, x, y);
      worst_iso = std::max(worst_iso, std::abs(dist(m, involution(m, w, x), involution(m, w, y)) - d) / std::max(1.0, d));
    }
    EXPECT_LE(worst_sq, 1e-12) << m.name();
    EXPECT_LE(worst_iso, 1e-10) << m.name();
  }
}

TEST(Dist, TriangleInequality) {
  Rng rng = make_rng(6);
  for (const auto& m : all_models()) {
    for (int i = 0; i < 1000; ++i) {
      Point x = random_point(m, rng), y = random_point(m, rng), z = random_point(m, rng);
      EXPECT_LE(dist(m, x, y), dist(m, x, z) + dist(m, z, y) + 1e-12);
      EXPECT_DOUBLE_EQ(dist(m, x, y), dist(m, y, x));
    }
  }
}

TEST(Busemann, Examples) {
  for (const auto& m : all_models()) {
    Rng rng = make_rng(8);
    BoundaryPoint xi = random_boundary(m, rng);
    EXPECT_EQ(busemann(m, xi, origin(m), origin(m)), 0.0);
  }
  Model r2 = Model::real_ball(2);
  double b = busemann(r2, make_boundary(r2, {1, 0}), make_point(r2, {0.5, 0}), origin(r2));
  EXPECT_NEAR(b, -std::log(3.0), 1e-15);
}

TEST(Busemann, CocycleAndBound) {
  Rng rng = make_rng(9);
  for (const auto& m : all_models()) {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      BoundaryPoint xi = random_boundary(m, rng);
      Point x = random_point(m, rng), y = random_point(m, rng), z = random_point(m, rng);
      double bxy = busemann(m, xi, x, y);
      worst = std::max(worst, std::abs(bxy + busemann(m, xi, y, z) - busemann(m, xi, x, z)));
      EXPECT_LE(std::abs(bxy), dist(m, x, y) + 1e-12);
    }
    EXPECT_LE(worst, 1e-12) << m.name();
  }
}

TEST(PoissonKernel, Examples) {
  for (const auto& m : all_models()) {
    Rng rng = make_rng(10);
    EXPECT_NEAR(poisson_kernel(m, origin(m), random_boundary(m, rng)), 1.0, 1e-15);
  }
  Model d = Model::disk();
  EXPECT_NEAR(poisson_kernel(d, disk_point(0.5), disk_boundary(0)), 3.0, 1e-14);
  Model c2 = Model::complex_ball(2);
  Point w = complex_point(c2, {{0.3, 0}, {0, 0.1}});
  BoundaryPoint zeta = make_boundary(c2, {1, 0, 0, 0});
  double base = (1 - 0.09 - 0.01) / std::norm(1.0 - oracle::cplx(0.3, 0));
  double p = poisson_kernel(c2, w, zeta);
  EXPECT_NEAR(p, base * base, 1e-13);
  EXPECT_NEAR(p, std::exp(-2 * busemann(c2, zeta, w, origin(c2))), 1e-12 * p);
}

TEST(PoissonKernel, EqualsExponentialOfBusemann) {
  Rng rng = make_rng(12);
  for (const auto& m : all_models()) {
    for (int i = 0; i < 1000; ++i) {
      BoundaryPoint xi = random_boundary(m, rng);
      Point x = random_point(m, rng);
      double p = poisson_kernel(m, x, xi);
      EXPECT_GT(p, 0);
      EXPECT_NEAR(std::exp(-m.entropy() * busemann(m, xi, x, origin(m))) / p, 1.0, 1e-12);
    }
  }
}

TEST(Disk, AgreesWithComplexAndRealParameterizations) {
  Model d = Model::disk(), c1 = Model::complex_ball(1), r2 = Model::real_ball(2);
  EXPECT_EQ(c1.entropy(), r2.entropy());
  Rng rng = make_rng(13);
  for (int i = 0; i < 200; ++i) {
    Point x = random_point(d, rng), y = random_point(d, rng);
    BoundaryPoint xi = random_boundary(d, rng);
    auto as = [](const Model& m, const Coords& p) { return make_point(m, {p.c[0], p.c[1]}); };
    auto asb = [](const Model& m, const Coords& p) { return make_boundary(m, {p.c[0], p.c[1]}); };
    double dd = dist(d, x, y);
    EXPECT_NEAR(dist(c1, as(c1, x), as(c1, y)), dd, 1e-12);
    EXPECT_NEAR(dist(r2, as(r2, x), as(r2, y)), dd, 1e-11 * std::max(1.0, dd));
    double p = poisson_kernel(d, x, xi);
    EXPECT_NEAR(poisson_kernel(r2, as(r2, x), asb(r2, xi)) / p, 1.0, 1e-12);
    EXPECT_NEAR(busemann(r2, asb(r2, xi), as(r2, x), as(r2, y)), busemann(d, xi, x, y), 1e-11);
  }
}

TEST(VolumeDensity, Examples) {
  EXPECT_EQ(volume_density(Model::disk(), origin(Model::disk())), 1.0);
  EXPECT_NEAR(volume_density(Model::disk(), disk_point(0.5)), 1 / 0.5625, 1e-14);
  Model r3 = Model::real_ball(3);
  EXPECT_NEAR(volume_density(r3, make_point(r3, {0.3, 0.4, 0})), 1 / (0.75 * 0.75 * 0.75), 1e-13);
}

TEST(BallVolume, DiskClosedFormAndOracle) {
  Model d = Model::disk();
  EXPECT_EQ(ball_volume(d, 0), 0.0);
  double t = std::tanh(1.0);
  double radial = 2 * oracle::pi * oracle::integrate([](double s) { return s / ((1 - s * s) * (1 - s * s)); }, 0, t);
  double v = ball_volume(d, 2);
  EXPECT_NEAR(v, radial, 1e-10 * radial);
  EXPECT_NEAR(v, oracle::pi * std::pow(std::sinh(1.0), 2), 1e-10 * v);
  EXPECT_NEAR(v, 4.3388, 1e-4);
  EXPECT_NEAR(ball_volume(d, 20) / (oracle::pi * std::exp(20.0) / 4), 1.0, 1e-8);
  EXPECT_THROW(ball_volume(d, -1), UsageError);
}

TEST(BallVolume, OtherModelsMatchEuclideanRadialIntegral) {
  for (const auto& m : all_models()) {
    for (double r : {0.5, 2.0, 5.0}) {
      double ref = oracle::ball_volume_euclid(m.real_dim(), m.density_exponent(), r);
      EXPECT_NEAR(ball_volume(m, r), ref, 1e-9 * ref) << m.name() << " r=" << r;
    }
  }
}

TEST(BallVolume, IncreasingWithExponentialGrowth) {
  for (const auto& m : all_models()) {
    double prev = 0;
    for (double r = 0.5; r <= 12; r += 0.5) {
      double v = ball_volume(m, r);
      EXPECT_GT(v, prev);
      prev = v;
    }
    double q1 = ball_volume(m, 14) / std::exp(14 * m.entropy());
    double q2 = ball_volume(m, 16) / std::exp(16 * m.entropy());
    EXPECT_NEAR(q1 / q2, 1.0, 1e-2) << m.name();
  }
}

TEST(Measure, InvariantUnderInvolution) {
  // Bump supported in |x| < 0.5; integrate f and f o phi_w against mu.
  auto f = [](oracle::cplx x) {
    double r2 = std::norm(x) / 0.25;
    return r2 < 1 ? std::exp(-1 / (1 - r2)) * (1 + x.real()) : 0.0;
  };
  auto mu = [](oracle::cplx x) { return 1 / ((1 - std::norm(x)) * (1 - std::norm(x))); };
  Model d = Model::disk();
  double base = oracle::disk_integral([&](oracle::cplx x) { return f(x) * mu(x); }, {}, 0.5, 1e-11);
  for (oracle::cplx w : {oracle::cplx(0.3, 0.2), oracle::cplx(-0.6, 0.1)}) {
    Point wp = disk_point(w);
    // The support maps onto a Euclidean disk whose diameter lies along w.
    auto phi = [w](oracle::cplx x) { return (w - x) / (1.0 - std::conj(w) * x); };
    oracle::cplx u = w / std::abs(w), p1 = phi(0.5 * u), p2 = phi(-0.5 * u);
    oracle::cplx c = (p1 + p2) / 2.0;
    double rho = std::abs(p1 - p2) / 2;
    double moved = oracle::disk_integral(
        [&](oracle::cplx v) {
          oracle::cplx x = c + v;
          return f(involution(d, wp, disk_point(x)).z()) * mu(x);
        },
        {}, rho, 1e-11);
    EXPECT_NEAR(moved / base, 1.0, 1e-6);
  }
}

TEST(Radius, EuclidGeodesicRoundTrip) {
  for (double r : {0.1, 1.0, 5.0, 20.0}) EXPECT_NEAR(geodesic_radius(euclid_radius(r)), r, 1e-9 * r);
  EXPECT_NEAR(euclid_radius(std::log(3.0)), 0.5, 1e-15);
}

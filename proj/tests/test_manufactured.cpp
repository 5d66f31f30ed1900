#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gavms/manufactured.hpp"
#include "support/oracles.hpp"

using namespace gavms;

namespace {

ManufacturedProblem reference() { return {}; }

Vec2 random_point(std::mt19937& rng, Domain d) {
  std::uniform_real_distribution<double> u(0.02, 0.98);
  const double y = u(rng);
  return {u(rng), d == Domain::atmosphere ? y : -y};
}

// Forcing rebuilt from finite differences of the closed-form velocity and gradient.
Vec2 forcing_by_differences(const ManufacturedProblem& p, Domain d, double t, Vec2 x, double h) {
  auto ux = [&](int c, double tt, Vec2 z) {
    const Vec2 u = exact_velocity(p, d, tt, z);
    return c == 0 ? u.x : u.y;
  };
  Vec2 out;
  for (int c = 0; c < 2; ++c) {
    const double dt = oracle::central([&](double s) { return ux(c, s, x); }, t, h);
    const double dx = oracle::central([&](double s) { return ux(c, t, {s, x.y}); }, x.x, h);
    const double dy = oracle::central([&](double s) { return ux(c, t, {x.x, s}); }, x.y, h);
    const double dxx =
        oracle::central([&](double s) { return exact_gradient(p, d, t, {s, x.y})[2 * c]; }, x.x, h);
    const double dyy =
        oracle::central([&](double s) { return exact_gradient(p, d, t, {x.x, s})[2 * c + 1]; }, x.y, h);
    const Vec2 u = exact_velocity(p, d, t, x);
    const double value = dt - p.viscosity(d) * (dxx + dyy) + u.x * dx + u.y * dy;
    (c == 0 ? out.x : out.y) = value;
  }
  return out;
}

}  // namespace

TEST(Manufactured, ClosedFormValue) {
  const Vec2 u = exact_velocity(reference(), Domain::atmosphere, 0.0, {0.5, 0.0});
  EXPECT_NEAR(u.x, 3.98410, 5e-6);
  EXPECT_NEAR(u.y, 0.0, 1e-15);
}

TEST(Manufactured, ZeroNormalVelocityOnInterface) {
  for (double t : {0.0, 0.3, 1.0})
    for (double x : {0.0, 0.17, 0.5, 0.81, 1.0})
      for (Domain d : kDomains) EXPECT_EQ(exact_velocity(reference(), d, t, {x, 0.0}).y, 0.0);
}

TEST(Manufactured, FrictionConditionHoldsOnInterface) {
  // nu_i du_i/dn_i = kappa |u_j - u_i| (u_j - u_i) tangentially at y = 0.
  const ManufacturedProblem p = reference();
  for (double x : {0.1, 0.35, 0.6, 0.9}) {
    const double t = 0.4;
    const double u1 = exact_velocity(p, Domain::atmosphere, t, {x, 0.0}).x;
    const double u2 = exact_velocity(p, Domain::ocean, t, {x, 0.0}).x;
    const double stress1 = -p.nu1 * exact_gradient(p, Domain::atmosphere, t, {x, 0.0})[1];
    const double stress2 = p.nu2 * exact_gradient(p, Domain::ocean, t, {x, 0.0})[1];
    const double jump = u2 - u1;
    EXPECT_NEAR(stress1, p.kappa * std::abs(jump) * jump, 1e-12 * (1 + std::abs(stress1)));
    EXPECT_NEAR(stress2, -p.kappa * std::abs(jump) * jump, 1e-12 * (1 + std::abs(stress2)));
  }
}

TEST(Manufactured, DerivativesMatchFiniteDifferences) {
  const ManufacturedProblem p = reference();
  std::mt19937 rng(5);
  const double h = 1e-5;
  for (int k = 0; k < 40; ++k) {
    for (Domain d : kDomains) {
      const Vec2 x = random_point(rng, d);
      const double t = 0.7;
      const Tensor2 g = exact_gradient(p, d, t, x);
      const double dux = oracle::central([&](double s) { return exact_velocity(p, d, t, {s, x.y}).x; }, x.x, h);
      const double duy = oracle::central([&](double s) { return exact_velocity(p, d, t, {x.x, s}).x; }, x.y, h);
      const double dvx = oracle::central([&](double s) { return exact_velocity(p, d, t, {s, x.y}).y; }, x.x, h);
      const double dvy = oracle::central([&](double s) { return exact_velocity(p, d, t, {x.x, s}).y; }, x.y, h);
      EXPECT_NEAR(g[0], dux, 1e-7);
      EXPECT_NEAR(g[1], duy, 1e-7);
      EXPECT_NEAR(g[2], dvx, 1e-7);
      EXPECT_NEAR(g[3], dvy, 1e-7);
      EXPECT_NEAR(g[0] + g[3], 0.0, 1e-12);

      const Vec2 ut = exact_time_derivative(p, d, t, x);
      EXPECT_NEAR(ut.x, oracle::central([&](double s) { return exact_velocity(p, d, s, x).x; }, t, h), 1e-7);
      EXPECT_NEAR(ut.y, oracle::central([&](double s) { return exact_velocity(p, d, s, x).y; }, t, h), 1e-7);

      const Vec2 lap = exact_laplacian(p, d, t, x);
      const double lx = oracle::central([&](double s) { return exact_gradient(p, d, t, {s, x.y})[0]; }, x.x, h) +
                        oracle::central([&](double s) { return exact_gradient(p, d, t, {x.x, s})[1]; }, x.y, h);
      EXPECT_NEAR(lap.x, lx, 1e-6);
    }
  }
}

TEST(Manufactured, ForcingResidualAgainstFiniteDifferences) {
  const ManufacturedProblem p = reference();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Domain d = k % 2 ? Domain::ocean : Domain::atmosphere;
    const Vec2 x = random_point(rng, d);
    const double t = time(rng);
    const Vec2 f = forcing(p, d, t, x);
    const Vec2 fd = forcing_by_differences(p, d, t, x, 1e-5);
    worst = std::max({worst, std::abs(f.x - fd.x), std::abs(f.y - fd.y)});
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Manufactured, SolutionDecaysInTime) {
  const ManufacturedProblem p = reference();
  double previous = INFINITY;
  for (double t = 0.0; t <= 2.0; t += 0.25) {
    const Vec2 u = exact_velocity(p, Domain::atmosphere, t, {0.3, 0.6});
    const double n = norm(u);
    EXPECT_LT(n, previous);
    previous = n;
  }
}

TEST(Manufactured, ZeroTrajectoryErrorMatchesTensorGauss) {
  const ManufacturedProblem p = reference();
  const Space space = build_space(generate_two_domain_mesh(2));
  const double dt = 0.25;
  std::vector<std::array<Vector, 2>> levels;
  std::vector<double> times;
  for (int j = 0; j <= 4; ++j) {
    levels.push_back({Vector::Zero(space[Domain::atmosphere].velocity_dofs()),
                      Vector::Zero(space[Domain::ocean].velocity_dofs())});
    times.push_back(j * dt);
  }
  const AccumulatedErrors e = accumulated_errors(space, levels, times, dt, p);

  std::vector<double> g, w;
  oracle::gauss_legendre(10, g, w);
  double l2 = 0.0, h1 = 0.0;
  for (int j = 1; j <= 4; ++j)
    for (Domain d : kDomains)
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) {
          const Vec2 x{g[a], d == Domain::atmosphere ? g[b] : -g[b]};
          const Vec2 u = exact_velocity(p, d, times[j], x);
          const Tensor2 G = exact_gradient(p, d, times[j], x);
          l2 += dt * w[a] * w[b] * dot(u, u);
          h1 += dt * w[a] * w[b] * (G[0] * G[0] + G[1] * G[1] + G[2] * G[2] + G[3] * G[3]);
        }
  // the library integrates with a degree-6 rule; the integrand has degree 8
  EXPECT_NEAR(e.l2l2, std::sqrt(l2), 1e-7 * std::sqrt(l2));
  EXPECT_NEAR(e.l2h1, std::sqrt(h1), 1e-7 * std::sqrt(h1));
}

TEST(Manufactured, AccumulatorRejectsMismatchedTimes) {
  const Space space = build_space(generate_two_domain_mesh(1));
  EXPECT_THROW(accumulated_errors(space, {}, {0.0}, 0.1, reference()), std::invalid_argument);
}

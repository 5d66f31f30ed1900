#include "gavms/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace gavms {

namespace {

// g = x^2 (1-x)^2 and its derivatives.
struct Profile {
  double g, g1, g2, g3;
  explicit Profile(double x)
      : g(x * x * (1 - x) * (1 - x)),
        g1(2 * x - 6 * x * x + 4 * x * x * x),
        g2(2 - 12 * x + 12 * x * x),
        g3(-12 + 24 * x) {}
};

struct Amplitudes {
  double slow;  // multiplies the g-profile part, decays like e^{-2bt}
  double fast;  // multiplies the atmosphere-only part, decays like e^{-bt}
  double r;     // vertical stretch
};

Amplitudes amplitudes(const ManufacturedProblem& p, Domain d, double t) {
  Amplitudes a;
  a.slow = p.a * p.nu1 * std::exp(-2 * p.b * t);
  a.fast = d == Domain::atmosphere ? p.a * std::exp(-p.b * t) * p.nu1 / std::sqrt(p.kappa * p.a) : 0.0;
  a.r = d == Domain::atmosphere ? 1.0 : p.nu1 / p.nu2;
  return a;
}

}  // namespace

Vec2 exact_velocity(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const Amplitudes A = amplitudes(p, d, t);
  const Profile g(x.x);
  const double y = x.y;
  return {A.slow * g.g * (1 + A.r * y) + A.fast * (x.x - x.x * x.x),
          -0.5 * A.slow * g.g1 * (2 * y + A.r * y * y) + A.fast * y * (2 * x.x - 1)};
}

Tensor2 exact_gradient(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const Amplitudes A = amplitudes(p, d, t);
  const Profile g(x.x);
  const double y = x.y;
  return {A.slow * g.g1 * (1 + A.r * y) + A.fast * (1 - 2 * x.x), A.slow * A.r * g.g,
          -0.5 * A.slow * g.g2 * (2 * y + A.r * y * y) + A.fast * 2 * y,
          -A.slow * g.g1 * (1 + A.r * y) + A.fast * (2 * x.x - 1)};
}

Vec2 exact_time_derivative(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const Amplitudes A = amplitudes(p, d, t);
  const Profile g(x.x);
  const double y = x.y;
  const double slow = -2 * p.b * A.slow;
  const double fast = -p.b * A.fast;
  return {slow * g.g * (1 + A.r * y) + fast * (x.x - x.x * x.x),
          -0.5 * slow * g.g1 * (2 * y + A.r * y * y) + fast * y * (2 * x.x - 1)};
}

Vec2 exact_laplacian(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const Amplitudes A = amplitudes(p, d, t);
  const Profile g(x.x);
  const double y = x.y;
  return {A.slow * g.g2 * (1 + A.r * y) - 2 * A.fast,
          A.slow * (-0.5 * g.g3 * (2 * y + A.r * y * y) - A.r * g.g1)};
}

Vec2 exact_convection(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const Vec2 u = exact_velocity(p, d, t, x);
  const Tensor2 G = exact_gradient(p, d, t, x);
  return {u.x * G[0] + u.y * G[1], u.x * G[2] + u.y * G[3]};
}

Vec2 forcing(const ManufacturedProblem& p, Domain d, double t, Vec2 x) {
  const double nu = p.viscosity(d);
  const Vec2 ut = exact_time_derivative(p, d, t, x);
  const Vec2 lap = exact_laplacian(p, d, t, x);
  const Vec2 conv = exact_convection(p, d, t, x);
  return {ut.x - nu * lap.x + conv.x, ut.y - nu * lap.y + conv.y};
}

void ErrorAccumulator::add(const Space& space, const std::array<Vector, 2>& velocity, double t) {
  for (Domain d : kDomains) {
    const ErrorNorms e = error_norms(
        space[d], velocity[index(d)], [&](Vec2 x) { return exact_velocity(problem_, d, t, x); },
        [&](Vec2 x) { return exact_gradient(problem_, d, t, x); });
    sum_l2_ += e.l2 * e.l2;
    sum_h1_ += e.h1_semi * e.h1_semi;
  }
  ++levels_;
}

double ErrorAccumulator::l2l2() const { return std::sqrt(dt_ * sum_l2_); }
double ErrorAccumulator::l2h1() const { return std::sqrt(dt_ * sum_h1_); }

AccumulatedErrors accumulated_errors(const Space& space, const std::vector<std::array<Vector, 2>>& levels,
                                     const std::vector<double>& times, double dt, const ManufacturedProblem& problem) {
  if (levels.size() != times.size()) throw std::invalid_argument("levels and times differ in length");
  ErrorAccumulator acc(problem, dt);
  for (std::size_t j = 1; j < levels.size(); ++j) acc.add(space, levels[j], times[j]);
  return {acc.l2l2(), acc.l2h1()};
}

}  // namespace gavms

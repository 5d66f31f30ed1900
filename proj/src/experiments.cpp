#include "gavms/experiments.hpp"

#include <cmath>
#include <numbers>

namespace gavms {

ProblemData manufactured_data(const ManufacturedProblem& problem, bool homogeneous) {
  ProblemData data;
  data.forcing = [problem](Domain d, double t, Vec2 x) { return forcing(problem, d, t, x); };
  if (!homogeneous)
    data.boundary = [problem](Domain d, double t, Vec2 x) { return exact_velocity(problem, d, t, x); };
  return data;
}

InitialData manufactured_initial(const ManufacturedProblem& problem, bool exact_second_level) {
  InitialData init;
  init.velocity = [problem](Domain d, double t, Vec2 x) { return exact_velocity(problem, d, t, x); };
  if (exact_second_level) init.second_level = init.velocity;
  return init;
}

SpaceTimeField rotating_initial_field() {
  return [](Domain, double, Vec2 x) {
    constexpr double pi = std::numbers::pi;
    const double sx = std::sin(pi * x.x), sy = std::sin(pi * x.y);
    return Vec2{std::sin(2 * pi * x.y) * sx * sx, -std::sin(2 * pi * x.x) * sy * sy};
  };
}

ProblemData step_data(double peak) {
  ProblemData data;
  data.boundary = [peak](Domain d, double, Vec2 x) {
    if (d == Domain::atmosphere && std::abs(x.x) < 1e-12 && x.y >= 1.0 && x.y <= 2.0)
      return Vec2{4.0 * peak * (x.y - 1.0) * (2.0 - x.y), 0.0};
    return Vec2{};
  };
  return data;
}

}  // namespace gavms

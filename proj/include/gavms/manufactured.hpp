#pragma once

#include <array>

#include "gavms/space.hpp"

namespace gavms {

/// Closed-form two-domain solution on [0,1]x[0,1] (atmosphere) over [0,1]x[-1,0]
/// (ocean) with zero pressure. Satisfies the friction interface condition exactly.
struct ManufacturedProblem {
  double a = 1.0;
  double b = 0.5;
  double kappa = 1e-3;
  double nu1 = 0.5;
  double nu2 = 0.1;

  double viscosity(Domain d) const { return d == Domain::atmosphere ? nu1 : nu2; }
};

Vec2 exact_velocity(const ManufacturedProblem& p, Domain d, double t, Vec2 x);
Tensor2 exact_gradient(const ManufacturedProblem& p, Domain d, double t, Vec2 x);
Vec2 exact_time_derivative(const ManufacturedProblem& p, Domain d, double t, Vec2 x);
Vec2 exact_laplacian(const ManufacturedProblem& p, Domain d, double t, Vec2 x);
/// (u . grad) u
Vec2 exact_convection(const ManufacturedProblem& p, Domain d, double t, Vec2 x);
/// f = du/dt - nu lap u + (u . grad) u with the physical viscosity.
Vec2 forcing(const ManufacturedProblem& p, Domain d, double t, Vec2 x);

/// Accumulates (dt sum_j ||e(t^j)||^2)^{1/2} over both domains, in L2 and in the
/// H1 seminorm. Levels are added one at a time so trajectories need not be stored.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const ManufacturedProblem& problem, double dt) : problem_(problem), dt_(dt) {}

  void add(const Space& space, const std::array<Vector, 2>& velocity, double t);

  double l2l2() const;
  double l2h1() const;
  int levels() const { return levels_; }

 private:
  ManufacturedProblem problem_;
  double dt_;
  double sum_l2_ = 0.0;
  double sum_h1_ = 0.0;
  int levels_ = 0;
};

struct AccumulatedErrors {
  double l2l2 = 0.0;
  double l2h1 = 0.0;
};

/// Errors over levels t^1..t^M of a stored trajectory; level 0 is the initial datum
/// and is excluded. `times[j]` is the time of `levels[j]`.
AccumulatedErrors accumulated_errors(const Space& space, const std::vector<std::array<Vector, 2>>& levels,
                                     const std::vector<double>& times, double dt, const ManufacturedProblem& problem);

}  // namespace gavms

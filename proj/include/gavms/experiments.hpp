#pragma once

#include "gavms/manufactured.hpp"
#include "gavms/schemes.hpp"

namespace gavms {

/// Forcing and Dirichlet data of the manufactured solution. With `homogeneous`
/// the boundary data is dropped and only the forcing is kept.
ProblemData manufactured_data(const ManufacturedProblem& problem, bool homogeneous = false);
/// u^0 from the exact solution; with `exact_second_level` also u^1 = u(dt).
InitialData manufactured_initial(const ManufacturedProblem& problem, bool exact_second_level);

/// Counter-rotating sine-product field, identical formula in both domains.
SpaceTimeField rotating_initial_field();

/// Parabolic inflow with peak `peak` on the step inlet x = 0, 1 <= y <= 2; zero
/// elsewhere on the Dirichlet boundary.
ProblemData step_data(double peak = 1.0);

}  // namespace gavms

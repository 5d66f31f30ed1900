#pragma once

#include <string>
#include <vector>

#include "gavms/diagnostics.hpp"

namespace gavms {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// ASCII VTK XML unstructured grid of one subdomain: vertices, triangles (cell
/// type 5), point data "velocity" (3 components, z = 0) and "pressure". The P2
/// velocity is sampled at the vertices. Throws std::runtime_error when the file
/// cannot be written.
void write_vtu(const DomainSpace& space, const Vector& velocity, const Vector& pressure, const std::string& path);

struct StepTraceRow {
  double time = 0.0;
  std::array<double, 2> norm{};
  bool blown_up = false;
};

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);
void write_energy_csv(const std::string& path, const std::vector<EnergySample>& samples);
void write_step_csv(const std::string& path, const std::vector<StepTraceRow>& rows);

}  // namespace gavms

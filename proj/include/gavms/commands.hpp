#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gavms/config.hpp"
#include "gavms/manufactured.hpp"
#include "gavms/diagnostics.hpp"
#include "gavms/output.hpp"

namespace gavms {

/// Process exit codes of the command-line driver.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config_error = 2, exit_solver_failure = 3 };

ManufacturedProblem manufactured_problem(const RunConfig& config);
CoupledMesh build_mesh(const RunConfig& config, int n);

/// One manufactured run at refinement n; a failed run gives converged = false and NaN errors.
ConvergenceRow convergence_level(const RunConfig& config, SchemeKind scheme, int n);
/// All refinement levels of config.refinement with rates filled in.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config, SchemeKind scheme, std::ostream* log = nullptr);

struct EnergyRun {
  SchemeKind scheme = SchemeKind::ga;
  RunSummary summary;
  std::vector<EnergySample> samples;
};

/// Runs every scheme in config.schemes from the rotating initial field with zero
/// forcing and homogeneous boundary data.
std::vector<EnergyRun> energy_experiment(const RunConfig& config);

struct StepRun {
  SchemeKind scheme = SchemeKind::ga;
  RunSummary summary;
  std::vector<StepTraceRow> trace;
  int snapshots = 0;  ///< snapshot sets written
};

/// Step-flow runs for every scheme in config.schemes. Snapshots are written to
/// `snapshot_dir` every config.snapshot_every steps when the directory is non-empty.
std::vector<StepRun> step_experiment(const RunConfig& config, const std::string& snapshot_dir = {});

/// Experiment drivers behind the CLI subcommands. They write their CSV files
/// into config.output_dir, print a table to `out` and return an ExitCode.
int cmd_convergence(const RunConfig& config, std::ostream& out);
int cmd_energy(const RunConfig& config, std::ostream& out);
int cmd_step(const RunConfig& config, std::ostream& out);

}  // namespace gavms

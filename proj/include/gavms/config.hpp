#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gavms/schemes.hpp"

namespace gavms {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { convergence, energy, step };
enum class MeshKind { two_square, step };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Resolved run configuration. Defaults depend on the experiment; see
/// defaults_for(). The "h" and "1/N" sentinels are kept as flags because a
/// convergence study resolves them once per refinement level.
struct RunConfig {
  Experiment experiment = Experiment::convergence;
  SchemeKind scheme = SchemeKind::ga_vms;
  /// Schemes run by the energy and step experiments.
  std::vector<SchemeKind> schemes;
  double nu1 = 0.5;
  double nu2 = 0.1;
  double kappa = 1e-3;
  double nu_t = 0.0;
  bool nu_t_is_h = true;
  double dt = 0.0;
  bool dt_is_inverse_n = true;
  double t_end = 1.0;
  double a = 1.0;
  double b = 0.5;
  MeshKind mesh_kind = MeshKind::two_square;
  int mesh_n = 8;
  double mesh_h = 0.14;
  std::vector<int> refinement{8, 16, 32, 64};
  double picard_tol = 1e-10;
  int picard_max = 50;
  ConvectionForm convection = ConvectionForm::skew;
  /// Start two-level schemes from the exact u^1 instead of the IMEX bootstrap.
  bool exact_second_level = false;
  std::string output_dir = "out";
  int snapshot_every = 0;  ///< 0 disables snapshots
  double inflow = 1.0;     ///< peak inflow speed of the step experiment

  /// Mesh size of a two-square mesh with n cells per side (1/n), or mesh_h for the step.
  double h_for(int n) const;
  /// SchemeConfig for one run at refinement n (ignored for the step mesh).
  SchemeConfig scheme_config(SchemeKind kind, int n) const;
};

RunConfig defaults_for(Experiment experiment);

/// Parses flat `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// values and duplicate keys throw ConfigError. When `experiment` is given it
/// overrides (and must agree with) an `experiment` key in the text.
RunConfig parse_config(const std::string& text, const Experiment* experiment = nullptr);
RunConfig load_config(const std::string& path, const Experiment* experiment = nullptr);

/// Checks ranges and consistency; throws ConfigError.
void validate(const RunConfig& config);

}  // namespace gavms

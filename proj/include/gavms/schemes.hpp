#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gavms/assembly.hpp"
#include "gavms/solver.hpp"
#include "gavms/space.hpp"

namespace gavms {

enum class SchemeKind { ga, ga_vms, ga_vms_alt, twm, twm_vms };

std::string to_string(SchemeKind kind);
/// Accepts "ga", "ga-vms", "ga-vms-alt", "twm", "twm-vms".
SchemeKind parse_scheme(const std::string& name);

bool is_vms(SchemeKind kind);
bool is_monolithic(SchemeKind kind);

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::ga_vms;
  double nu1 = 0.5;
  double nu2 = 0.1;
  double kappa = 1e-3;
  double nu_t = 0.0;  ///< eddy viscosity; ignored by the non-VMS schemes
  double dt = 0.1;
  double t_end = 1.0;
  double picard_tol = 1e-10;
  int picard_max = 50;
  ConvectionForm convection = ConvectionForm::skew;
  /// A step is declared blown up when either domain's L2 norm exceeds this.
  double blowup_norm = 1e3;
  /// Reuse the previous LU factors as the correction operator while they keep
  /// contracting the residual. The converged iterate satisfies the same tolerance.
  bool reuse_factorization = true;

  double viscosity(Domain d) const { return d == Domain::atmosphere ? nu1 : nu2; }
  /// nu_t for VMS schemes, 0 otherwise.
  double effective_nu_t() const { return is_vms(scheme) ? nu_t : 0.0; }
  /// Interface scaling per domain: (nu_i + nu_t)/nu_i for ga-vms-alt, 1 otherwise.
  std::array<double, 2> interface_scale() const;
  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

/// Time level n of the coupled solution.
struct State {
  double time = 0.0;
  int level = 0;
  VelocityPair velocity;     ///< u^n
  VelocityPair previous;     ///< u^{n-1}; meaningful when has_previous
  bool has_previous = false;
  VelocityPair pressure;     ///< p^n at the vertices
  VelocityPair large_scale;  ///< G^n, 4 * vertex_count per domain (VMS only, else empty)
};

using SpaceTimeField = std::function<Vec2(Domain, double, Vec2)>;

/// Forcing and Dirichlet data. Empty callables mean zero.
struct ProblemData {
  SpaceTimeField forcing;
  SpaceTimeField boundary;
};

class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(std::vector<double> residuals, const std::string& what)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  /// Relative residual at every iterate, in order.
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

struct StepStats {
  std::array<int, 2> picard_iterations{};  ///< per domain; both entries equal for monolithic solves
  std::array<int, 2> factorizations{};
  std::array<double, 2> final_residual{};
};

/// Owns the time-independent operators of one space and steps a configured scheme.
/// Factorizations keep their symbolic analysis across steps, so a Stepper is not
/// safe to share between threads.
class Stepper {
 public:
  Stepper(const Space& space, SchemeConfig config);

  const Space& space() const { return *space_; }
  const SchemeConfig& config() const { return config_; }

  /// Level-0 state from u^0 (constraints applied with the boundary data at t0).
  State initial_state(const VelocityPair& u0, const ProblemData& data, double t0 = 0.0) const;
  /// Interpolates a space-time field at t0 and builds the level-0 state.
  State initial_state(const SpaceTimeField& u0, const ProblemData& data, double t0 = 0.0) const;
  /// Appends a given level u^1 (e.g. an exact solution) to a level-0 state.
  State with_second_level(const State& s0, const VelocityPair& u1, const ProblemData& data) const;

  /// One backward-Euler step with implicit own interface term and explicit partner
  /// trace, all weighted by |[u^0]|; convection linearised about u^0.
  State imex_bootstrap(const State& s0, const ProblemData& data, StepStats* stats = nullptr);
  /// Advances with the configured scheme.
  State step(const State& s, const ProblemData& data, StepStats* stats = nullptr);

  State step_ga(const State& s, const ProblemData& data, StepStats* stats = nullptr);
  State step_ga_vms(const State& s, const ProblemData& data, StepStats* stats = nullptr);
  State step_twm(const State& s, const ProblemData& data, StepStats* stats = nullptr);
  State step_twm_vms(const State& s, const ProblemData& data, StepStats* stats = nullptr);

  const SparseMatrix& mass(Domain d) const { return mass_[index(d)]; }
  const SparseMatrix& unit_stiffness(Domain d) const { return stiffness_[index(d)]; }
  const SparseMatrix& divergence(Domain d) const { return divergence_[index(d)]; }
  const SparseMatrix& p1_mass(Domain d) const { return p1_mass_[index(d)]; }
  const GradientProjector& projector(Domain d) const { return projector_[static_cast<std::size_t>(index(d))]; }

  /// sqrt(u^T M u) for one domain.
  double l2_norm(Domain d, const Vector& velocity) const;
  /// Constrained values (Dirichlet data at time t, zero normal trace, zero pinned
  /// pressure) in saddle-system layout.
  Vector constrained_values(Domain d, double t, const ProblemData& data) const;
  /// Load vector (f(t), v); zero when data.forcing is empty.
  Vector load(Domain d, double t, const ProblemData& data) const;

 private:
  struct PicardOutcome {
    int iterations = 0;
    int factorizations = 0;
    double residual = 0.0;
  };

  struct DomainProblem {
    Domain domain;
    SparseMatrix fixed;  ///< velocity block without convection
    Vector rhs;          ///< velocity right-hand side
    Vector constrained;  ///< saddle layout
    Vector guess;        ///< saddle layout
    Vector advecting;    ///< fixed advecting velocity for a linearised solve
  };

  State step_decoupled(const State& s, const ProblemData& data, InterfaceCoupling coupling, bool vms,
                       StepStats* stats);
  State step_monolithic(const State& s, const ProblemData& data, bool vms, StepStats* stats);
  DomainProblem domain_problem(Domain d, const State& s, const ProblemData& data, double nu_t,
                               const SparseMatrix& interface_block, const Vector& interface_rhs) const;
  /// Picard loop over one or two domains; cross blocks couple the velocities when
  /// two domains are given. Returns saddle vectors per domain in order.
  std::vector<Vector> picard(std::vector<DomainProblem>& problems, const std::array<SparseMatrix, 2>* cross,
                             Factorization& factorization, bool linearised, PicardOutcome& outcome);
  /// Sparsity bookkeeping for one solve slot (a single domain or the coupled pair).
  struct Layout {
    std::vector<int> offset, free_offset, free_index;
    int n = 0;
    int free_count = 0;
    SparseMatrix convection_pattern;  ///< zero-valued convection blocks in saddle layout
    SparseMatrix pattern;             ///< fixed part plus convection pattern
    std::vector<double> values;       ///< fixed-part values on `pattern`
    std::vector<int> reduced_slot;    ///< per pattern entry: position in `reduced`, or -1
    std::vector<std::array<int, 3>> lifting;  ///< (entry, reduced row, constrained column)
    SparseMatrix reduced;
    std::vector<std::array<std::vector<int>, 2>> convection_slot;  ///< per domain and component
  };
  Layout& layout(const std::vector<Domain>& domains, const SparseMatrix& fixed);

  State finish(const State& s, const std::vector<Vector>& saddle, bool vms) const;

  const Space* space_;
  SchemeConfig config_;
  std::array<SparseMatrix, 2> mass_;
  std::array<SparseMatrix, 2> stiffness_;
  std::array<SparseMatrix, 2> divergence_;
  std::array<SparseMatrix, 2> p1_mass_;
  std::vector<GradientProjector> projector_;
  std::vector<ConvectionAssembler> convection_;
  std::array<std::unique_ptr<Layout>, 3> layouts_;
  std::array<Factorization, 2> domain_factorization_;
  Factorization coupled_factorization_;
};

/// Free-function forms; each builds a temporary Stepper.
State imex_bootstrap(const Space& space, const SchemeConfig& config, const State& s0, const ProblemData& data);
State step_ga(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data);
State step_ga_vms(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data);
State step_twm(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data);
State step_twm_vms(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data);

enum class RunStatus { completed, picard_diverged, blew_up };

std::string to_string(RunStatus status);

struct RunSummary {
  RunStatus status = RunStatus::completed;
  int steps = 0;            ///< time levels advanced past t=0
  double final_time = 0.0;  ///< time of the last accepted level
  double failure_time = 0.0;
  std::string message;
  int picard_iterations = 0;  ///< summed over domains and steps
  int factorizations = 0;
  double wall_seconds = 0.0;
};

struct InitialData {
  SpaceTimeField velocity;  ///< u^0 (evaluated at t=0)
  /// Optional u^1 for the two-level schemes; the IMEX bootstrap is used when empty.
  SpaceTimeField second_level;
};

using Observer = std::function<void(const State&)>;

/// Advances from t=0 to t_end. The observer sees every accepted level, including
/// the initial one(s). A Picard failure or a norm above blowup_norm ends the run
/// and is reported in the summary rather than thrown.
RunSummary run(const Space& space, const SchemeConfig& config, const ProblemData& data, const InitialData& initial,
               const Observer& observer = {});

/// Number of steps for t_end/dt; throws when the ratio is not within 1e-9 of an integer.
int step_count(double t_end, double dt);

}  // namespace gavms

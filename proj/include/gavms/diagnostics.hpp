#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gavms/schemes.hpp"

namespace gavms {

struct EnergySample {
  double time = 0.0;
  std::array<double, 2> kinetic{};      ///< ||u_i||^2
  std::array<double, 2> dissipation{};  ///< 2 nu_i dt sum ||grad u_i||^2 over the levels so far
  double aed = 0.0;                     ///< |I - KE - E|

  double total(Domain d) const { return kinetic[index(d)] + dissipation[index(d)]; }
};

/// Physical energy bookkeeping along a run (physical viscosities only; eddy
/// viscosity and interface friction show up in the AED). Use as an Observer.
class EnergyMonitor {
 public:
  EnergyMonitor(const Space& space, const SchemeConfig& config);

  void observe(const State& s);
  Observer observer() {
    return [this](const State& s) { observe(s); };
  }

  double initial_energy() const { return initial_; }
  const std::vector<EnergySample>& samples() const { return samples_; }

 private:
  const Space* space_;
  SchemeConfig config_;
  std::array<SparseMatrix, 2> mass_;
  double initial_ = 0.0;
  std::vector<EnergySample> samples_;
};

/// Every term of the GA-VMS discrete energy identity, summed over both domains.
/// Sums run over the steps n = 1..M taking level n to n+1.
struct EnergyLawTerms {
  double kinetic_final = 0.0;         ///< ||u^{M+1}||^2
  double gradient_final = 0.0;        ///< nu_T dt ||grad u^{M+1}||^2
  double increments = 0.0;            ///< sum ||u^{n+1} - u^n||^2
  double viscous = 0.0;               ///< dt sum 2 nu ||grad u^{n+1}||^2
  double small_scales = 0.0;          ///< nu_T dt sum (||grad u^{n+1} - G^n||^2 + ||grad u^n - G^n||^2)
  double interface_final = 0.0;       ///< kappa dt int |[u^M]| (|u_1^{M+1}|^2 + |u_2^{M+1}|^2)
  std::array<double, 2> interface_mixed{};  ///< kappa dt sum int ||[u^n]|^1/2 u_i^{n+1} - |[u^{n-1}]|^1/2 u_j^n|^2
  double kinetic_first = 0.0;         ///< ||u^1||^2
  double gradient_first = 0.0;        ///< nu_T dt ||grad u^1||^2
  double interface_first = 0.0;       ///< kappa dt int |[u^0]| (|u_1^1|^2 + |u_2^1|^2)
  double forcing = 0.0;               ///< 2 dt sum (f^{n+1}, u^{n+1})
  /// 2 dt sum of the work done by the constrained dofs and the dropped pressure
  /// row; zero for homogeneous boundary data.
  double boundary_work = 0.0;

  double lhs() const;
  double rhs() const;
  /// |lhs - rhs| / |rhs|, or |lhs - rhs| when rhs is zero.
  double residual() const;
};

/// Evaluates the energy identity over a stored GA-VMS (or GA) trajectory. States
/// must be consecutive levels starting at level 0, each carrying its pressure and,
/// for VMS, the projected gradient G. Throws std::invalid_argument when the
/// trajectory is too short, G is missing, or the scheme is not a GA variant with
/// unit interface scaling.
EnergyLawTerms discrete_energy_law(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                   const std::vector<State>& trajectory);
double verify_discrete_energy_law(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                  const std::vector<State>& trajectory);

struct StabilityBound {
  double lhs = 0.0;
  double rhs = 0.0;  ///< S_M (plus the boundary work for inhomogeneous data)
  bool satisfied = false;
};

/// Relative slack allowed in the stability comparison.
inline constexpr double kStabilitySlack = 1e-9;

/// Both sides of the unconditional stability bound. Dual norms of the forcing are
/// bounded by C_p ||f|| with C_p the subdomain diameter. The bound is guaranteed
/// for homogeneous boundary data.
StabilityBound verify_stability_bound(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                      const std::vector<State>& trajectory);

/// Bounding-box diagonal of one subdomain.
double domain_diameter(const DomainMesh& mesh);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double l2l2 = 0.0;
  double l2h1 = 0.0;
  bool converged = true;
  std::optional<double> rate_l2;
  std::optional<double> rate_h1;
};

/// Fills in log2 rates between consecutive converged rows. Throws
/// std::invalid_argument unless each N is twice the previous one.
std::vector<ConvergenceRow> convergence_rates(std::vector<ConvergenceRow> rows);

struct NormSample {
  double time = 0.0;
  std::array<double, 2> norm{};
};

/// ||u_i|| per domain for every state.
std::vector<NormSample> norm_trace(const Space& space, const std::vector<State>& trajectory);

}  // namespace gavms

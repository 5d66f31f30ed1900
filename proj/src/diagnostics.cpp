#include "gavms/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gavms {

EnergyMonitor::EnergyMonitor(const Space& space, const SchemeConfig& config) : space_(&space), config_(config) {
  for (Domain d : kDomains) mass_[index(d)] = assemble_mass(space[d]);
}

void EnergyMonitor::observe(const State& s) {
  EnergySample e;
  e.time = s.time;
  for (Domain d : kDomains) {
    const int i = index(d);
    e.kinetic[i] = s.velocity[i].dot(mass_[i] * s.velocity[i]);
    if (!samples_.empty())
      e.dissipation[i] = samples_.back().dissipation[i] +
                         2.0 * config_.viscosity(d) * config_.dt * gradient_norm_squared((*space_)[d], s.velocity[i]);
  }
  if (samples_.empty()) initial_ = e.kinetic[0] + e.kinetic[1];
  e.aed = std::abs(initial_ - e.total(Domain::atmosphere) - e.total(Domain::ocean));
  samples_.push_back(e);
}

double EnergyLawTerms::lhs() const {
  return kinetic_final + gradient_final + increments + viscous + small_scales + interface_final + interface_mixed[0] +
         interface_mixed[1];
}

double EnergyLawTerms::rhs() const {
  return kinetic_first + gradient_first + interface_first + forcing + boundary_work;
}

double EnergyLawTerms::residual() const {
  const double diff = std::abs(lhs() - rhs());
  const double scale = std::abs(rhs());
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

void check_trajectory(const Space& space, const SchemeConfig& config, const std::vector<State>& trajectory) {
  if (trajectory.size() < 2) throw std::invalid_argument("energy law needs at least levels 0 and 1");
  if (config.scheme != SchemeKind::ga && config.scheme != SchemeKind::ga_vms)
    throw std::invalid_argument("energy law is stated for the geometric-averaging schemes");
  if (config.convection != ConvectionForm::skew) throw std::invalid_argument("energy law needs skew convection");
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    const State& s = trajectory[n];
    if (s.level != static_cast<int>(n)) throw std::invalid_argument("trajectory levels are not consecutive from 0");
    for (Domain d : kDomains) {
      const int i = index(d);
      if (s.velocity[i].size() != space[d].velocity_dofs())
        throw std::invalid_argument("state velocity has the wrong size");
      if (config.effective_nu_t() > 0.0 && s.large_scale[i].size() != space[d].large_scale_dofs())
        throw std::invalid_argument("trajectory is missing the projected gradient history");
    }
  }
}

// Interface integral of sum_k w * f(point k) for the two-level samples.
template <class F>
double interface_sum(const InterfaceTrace& trace, F&& f) {
  double total = 0.0;
  for (const InterfacePoint& p : trace.points) total += p.weight * f(p);
  return total;
}

struct DomainOperators {
  SparseMatrix mass, stiffness, divergence;
};

// Work of the constrained velocity rows and of the pressure on the velocity for
// the step from `s` to `next`. Free rows are satisfied by the solve.
double boundary_work(const Space& space, const SchemeConfig& config, const std::array<DomainOperators, 2>& ops,
                     const State& s, const State& next, const InterfaceBlocks& blocks,
                     const std::array<Vector, 2>& loads) {
  double work = 0.0;
  const double nu_t = config.effective_nu_t();
  for (Domain d : kDomains) {
    const int i = index(d);
    const DomainSpace& ds = space[d];
    const DomainOperators& op = ops[i];
    const Vector& u = next.velocity[i];
    const Vector& p = next.pressure[i];
    Vector r = op.mass * (u - s.velocity[i]) / config.dt + op.stiffness * u +
               assemble_convection(ds, u, ConvectionForm::skew) * u + blocks.implicit[i] * u -
               op.divergence.transpose() * p - loads[i] - blocks.explicit_rhs[i];
    if (nu_t > 0.0) r -= assemble_vms_rhs(ds, s.large_scale[i], nu_t);
    const auto& kinds = ds.velocity_constraints();
    for (int k = 0; k < ds.velocity_dofs(); ++k)
      if (kinds[k] != DofKind::free) work += u[k] * r[k];
    work += p.dot(op.divergence * u);
  }
  return work;
}

}  // namespace

EnergyLawTerms discrete_energy_law(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                   const std::vector<State>& trajectory) {
  check_trajectory(space, config, trajectory);
  const double dt = config.dt;
  const double nu_t = config.effective_nu_t();
  const double kappa = config.kappa;
  std::array<SparseMatrix, 2> mass;
  std::array<DomainOperators, 2> ops;
  for (Domain d : kDomains) {
    const int i = index(d);
    mass[i] = assemble_mass(space[d]);
    ops[i] = {mass[i], assemble_stiffness(space[d], config.viscosity(d) + nu_t), assemble_divergence(space[d])};
  }
  auto kinetic = [&](const State& s) {
    double e = 0.0;
    for (Domain d : kDomains) e += s.velocity[index(d)].dot(mass[index(d)] * s.velocity[index(d)]);
    return e;
  };
  auto gradients = [&](const State& s) {
    double e = 0.0;
    for (Domain d : kDomains) e += gradient_norm_squared(space[d], s.velocity[index(d)]);
    return e;
  };

  EnergyLawTerms t;
  const State& first = trajectory[1];
  const State& last = trajectory.back();
  t.kinetic_first = kinetic(first);
  t.kinetic_final = kinetic(last);
  t.gradient_first = nu_t * dt * gradients(first);
  t.gradient_final = nu_t * dt * gradients(last);

  // Levels (1, 0) give |[u^0]| alongside the traces of u^1.
  const InterfaceTrace first_trace = sample_interface_trace(space, first.velocity, &trajectory[0].velocity);
  t.interface_first = kappa * dt * interface_sum(first_trace, [](const InterfacePoint& p) {
    return p.jump_previous * (dot(p.velocity[0], p.velocity[0]) + dot(p.velocity[1], p.velocity[1]));
  });

  for (std::size_t n = 1; n + 1 < trajectory.size(); ++n) {
    const State& prev = trajectory[n - 1];
    const State& cur = trajectory[n];
    const State& next = trajectory[n + 1];
    for (Domain d : kDomains) {
      const int i = index(d);
      const DomainSpace& ds = space[d];
      const Vector inc = next.velocity[i] - cur.velocity[i];
      t.increments += inc.dot(mass[i] * inc);
      t.viscous += 2.0 * config.viscosity(d) * dt * gradient_norm_squared(ds, next.velocity[i]);
      if (nu_t > 0.0)
        t.small_scales += nu_t * dt *
                          (small_scale_norm_squared(ds, next.velocity[i], cur.large_scale[i]) +
                           small_scale_norm_squared(ds, cur.velocity[i], cur.large_scale[i]));
    }
    // new_trace: traces of u^{n+1}, jump_previous = |[u^n]|.
    // old_trace: traces of u^n, jump_previous = |[u^{n-1}]|.
    const InterfaceTrace new_trace = sample_interface_trace(space, next.velocity, &cur.velocity);
    const InterfaceTrace old_trace = sample_interface_trace(space, cur.velocity, &prev.velocity);
    for (int i = 0; i < 2; ++i) {
      const int j = 1 - i;
      double sum = 0.0;
      for (std::size_t k = 0; k < new_trace.points.size(); ++k) {
        const InterfacePoint& a = new_trace.points[k];
        const InterfacePoint& b = old_trace.points[k];
        const Vec2 v = std::sqrt(a.jump_previous) * a.velocity[i] - std::sqrt(b.jump_previous) * b.velocity[j];
        sum += a.weight * dot(v, v);
      }
      t.interface_mixed[i] += kappa * dt * sum;
    }
    if (n + 2 == trajectory.size())
      t.interface_final = kappa * dt * interface_sum(new_trace, [](const InterfacePoint& p) {
        return p.jump_previous * (dot(p.velocity[0], p.velocity[0]) + dot(p.velocity[1], p.velocity[1]));
      });

    std::array<Vector, 2> loads;
    for (Domain d : kDomains) {
      const int i = index(d);
      loads[i] = data.forcing ? assemble_load(space[d], [&](Vec2 x) { return data.forcing(d, next.time, x); })
                              : Vector(Vector::Zero(space[d].velocity_dofs()));
      t.forcing += 2.0 * dt * loads[i].dot(next.velocity[i]);
    }
    const InterfaceBlocks blocks =
        assemble_interface_blocks(space, old_trace, kappa, InterfaceCoupling::geometric_average);
    t.boundary_work += 2.0 * dt * boundary_work(space, config, ops, cur, next, blocks, loads);
  }
  return t;
}

double verify_discrete_energy_law(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                  const std::vector<State>& trajectory) {
  return discrete_energy_law(space, config, data, trajectory).residual();
}

double domain_diameter(const DomainMesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  Vec2 lo = mesh.vertices.front(), hi = lo;
  for (const Vec2& v : mesh.vertices) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  return norm(hi - lo);
}

StabilityBound verify_stability_bound(const Space& space, const SchemeConfig& config, const ProblemData& data,
                                      const std::vector<State>& trajectory) {
  const EnergyLawTerms t = discrete_energy_law(space, config, data, trajectory);
  StabilityBound b;
  b.lhs = t.kinetic_final + t.gradient_final + 0.5 * t.viscous + t.interface_final + t.interface_mixed[0] +
          t.interface_mixed[1];
  b.rhs = t.kinetic_first + t.interface_first + t.gradient_first + t.boundary_work;
  if (data.forcing) {
    const Tensor2 zero{};
    for (Domain d : kDomains) {
      const DomainSpace& ds = space[d];
      const double cp = domain_diameter(ds.mesh());
      const Vector none = Vector::Zero(ds.velocity_dofs());
      double sum = 0.0;
      for (std::size_t n = 2; n < trajectory.size(); ++n) {
        const double time = trajectory[n].time;
        const double f = error_norms(
                             ds, none, [&](Vec2 x) { return data.forcing(d, time, x); },
                             [&](Vec2) { return zero; })
                             .l2;
        sum += f * f;
      }
      b.rhs += config.dt * cp * cp * sum / config.viscosity(d);
    }
  }
  b.satisfied = b.lhs <= b.rhs * (1.0 + kStabilitySlack);
  return b;
}

std::vector<ConvergenceRow> convergence_rates(std::vector<ConvergenceRow> rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].rate_l2.reset();
    rows[k].rate_h1.reset();
    if (k == 0) continue;
    if (rows[k].n != 2 * rows[k - 1].n) throw std::invalid_argument("refinement levels must double N");
    const ConvergenceRow& a = rows[k - 1];
    ConvergenceRow& b = rows[k];
    if (!a.converged || !b.converged) continue;
    if (a.l2l2 > 0.0 && b.l2l2 > 0.0) b.rate_l2 = std::log2(a.l2l2 / b.l2l2);
    if (a.l2h1 > 0.0 && b.l2h1 > 0.0) b.rate_h1 = std::log2(a.l2h1 / b.l2h1);
  }
  return rows;
}

std::vector<NormSample> norm_trace(const Space& space, const std::vector<State>& trajectory) {
  std::array<SparseMatrix, 2> mass;
  for (Domain d : kDomains) mass[index(d)] = assemble_mass(space[d]);
  std::vector<NormSample> out;
  out.reserve(trajectory.size());
  for (const State& s : trajectory) {
    NormSample n;
    n.time = s.time;
    for (Domain d : kDomains) {
      const int i = index(d);
      n.norm[i] = std::sqrt(std::max(0.0, s.velocity[i].dot(mass[i] * s.velocity[i])));
    }
    out.push_back(n);
  }
  return out;
}

}  // namespace gavms

#include "gavms/schemes.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

namespace gavms {

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::ga: return "ga";
    case SchemeKind::ga_vms: return "ga-vms";
    case SchemeKind::ga_vms_alt: return "ga-vms-alt";
    case SchemeKind::twm: return "twm";
    case SchemeKind::twm_vms: return "twm-vms";
  }
  return "?";
}

SchemeKind parse_scheme(const std::string& name) {
  for (SchemeKind k : {SchemeKind::ga, SchemeKind::ga_vms, SchemeKind::ga_vms_alt, SchemeKind::twm,
                       SchemeKind::twm_vms})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

bool is_vms(SchemeKind kind) {
  return kind == SchemeKind::ga_vms || kind == SchemeKind::ga_vms_alt || kind == SchemeKind::twm_vms;
}

bool is_monolithic(SchemeKind kind) { return kind == SchemeKind::twm || kind == SchemeKind::twm_vms; }

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::picard_diverged: return "picard_diverged";
    case RunStatus::blew_up: return "blew_up";
  }
  return "?";
}

std::array<double, 2> SchemeConfig::interface_scale() const {
  if (scheme != SchemeKind::ga_vms_alt) return {1.0, 1.0};
  return {(nu1 + nu_t) / nu1, (nu2 + nu_t) / nu2};
}

void SchemeConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (!(nu1 > 0.0) || !(nu2 > 0.0)) fail("viscosities must be positive");
  if (!(nu_t >= 0.0)) fail("eddy viscosity must be non-negative");
  if (!(kappa >= 0.0)) fail("friction coefficient must be non-negative");
  if (!(dt > 0.0)) fail("time step must be positive");
  if (!(t_end >= 0.0)) fail("final time must be non-negative");
  if (!(picard_tol > 0.0)) fail("picard tolerance must be positive");
  if (picard_max < 1) fail("picard cap must be at least 1");
  if (!(blowup_norm > 0.0)) fail("blow-up threshold must be positive");
}

int step_count(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("final time is not an integer multiple of the time step");
  return static_cast<int>(rounded);
}

namespace {

VelocityPair interpolate_pair(const Space& space, const SpaceTimeField& field, double t) {
  VelocityPair out;
  for (Domain d : kDomains)
    out[index(d)] = interpolate_velocity(space[d], [&](Vec2 x) { return field(d, t, x); });
  return out;
}

Vector saddle_vector(const DomainSpace& space, const Vector& velocity, const Vector& pressure) {
  Vector x(space.system_size());
  x.head(space.velocity_dofs()) = velocity;
  x.tail(space.pressure_dofs()) = pressure.size() ? pressure : Vector::Zero(space.pressure_dofs());
  return x;
}

void overwrite_constrained(const DomainSpace& space, Vector& saddle, const Vector& constrained) {
  const auto& free = space.free_index();
  for (int i = 0; i < space.system_size(); ++i)
    if (free[i] < 0) saddle[i] = constrained[i];
}

void append_block(Triplets& t, const SparseMatrix& m, int roff, int coff, double factor = 1.0) {
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) t.emplace_back(r + roff, it.col() + coff, factor * it.value());
}

void append_transposed(Triplets& t, const SparseMatrix& m, int roff, int coff, double factor) {
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) t.emplace_back(it.col() + roff, r + coff, factor * it.value());
}

// A reused factorization is replaced once a correction shrinks the residual by less than this.
constexpr double kStaleContraction = 0.3;

bool increasing_tail(const std::vector<double>& r, std::size_t n) {
  if (r.size() < n + 1) return false;
  for (std::size_t k = r.size() - n; k < r.size(); ++k)
    if (!(r[k] > r[k - 1])) return false;
  return true;
}

}  // namespace

Stepper::Stepper(const Space& space, SchemeConfig config) : space_(&space), config_(config) {
  config_.validate();
  for (Domain d : kDomains) {
    const int i = index(d);
    mass_[i] = assemble_mass(space[d]);
    stiffness_[i] = assemble_stiffness(space[d], 1.0);
    divergence_[i] = assemble_divergence(space[d]);
    p1_mass_[i] = assemble_p1_mass(space[d]);
    projector_.emplace_back(space[d]);
    convection_.emplace_back(space[d], config_.convection);
  }
}

double Stepper::l2_norm(Domain d, const Vector& velocity) const {
  return std::sqrt(std::max(0.0, velocity.dot(mass_[index(d)] * velocity)));
}

Vector Stepper::constrained_values(Domain d, double t, const ProblemData& data) const {
  const DomainSpace& ds = (*space_)[d];
  Vector out = Vector::Zero(ds.system_size());
  if (!data.boundary) return out;
  const auto& kinds = ds.velocity_constraints();
  const int nodes = ds.p2_node_count();
  for (int node = 0; node < nodes; ++node) {
    if (kinds[ds.velocity_dof(0, node)] != DofKind::dirichlet) continue;
    const Vec2 g = data.boundary(d, t, ds.node_position(node));
    out[ds.velocity_dof(0, node)] = g.x;
    out[ds.velocity_dof(1, node)] = g.y;
  }
  return out;
}

Vector Stepper::load(Domain d, double t, const ProblemData& data) const {
  const DomainSpace& ds = (*space_)[d];
  if (!data.forcing) return Vector::Zero(ds.velocity_dofs());
  return assemble_load(ds, [&](Vec2 x) { return data.forcing(d, t, x); });
}

State Stepper::initial_state(const VelocityPair& u0, const ProblemData& data, double t0) const {
  State s;
  s.time = t0;
  for (Domain d : kDomains) {
    const int i = index(d);
    const DomainSpace& ds = (*space_)[d];
    if (u0[i].size() != ds.velocity_dofs()) throw std::invalid_argument("initial velocity has the wrong size");
    Vector saddle = saddle_vector(ds, u0[i], Vector());
    overwrite_constrained(ds, saddle, constrained_values(d, t0, data));
    s.velocity[i] = saddle.head(ds.velocity_dofs());
    s.pressure[i] = Vector::Zero(ds.pressure_dofs());
    if (is_vms(config_.scheme)) s.large_scale[i] = projector(d).project(s.velocity[i]);
  }
  return s;
}

State Stepper::initial_state(const SpaceTimeField& u0, const ProblemData& data, double t0) const {
  return initial_state(interpolate_pair(*space_, u0, t0), data, t0);
}

State Stepper::with_second_level(const State& s0, const VelocityPair& u1, const ProblemData& data) const {
  State s = initial_state(u1, data, s0.time + config_.dt);
  s.level = s0.level + 1;
  s.previous = s0.velocity;
  s.has_previous = true;
  return s;
}

Stepper::DomainProblem Stepper::domain_problem(Domain d, const State& s, const ProblemData& data, double nu_t,
                                               const SparseMatrix& interface_block,
                                               const Vector& interface_rhs) const {
  const int i = index(d);
  const DomainSpace& ds = (*space_)[d];
  const double t1 = s.time + config_.dt;
  const double inv_dt = 1.0 / config_.dt;
  DomainProblem p;
  p.domain = d;
  p.fixed = inv_dt * mass_[i] + (config_.viscosity(d) + nu_t) * stiffness_[i] + interface_block;
  p.rhs = inv_dt * (mass_[i] * s.velocity[i]) + load(d, t1, data) + interface_rhs;
  if (nu_t > 0.0) {
    const Vector g = s.large_scale[i].size() ? s.large_scale[i] : projector(d).project(s.velocity[i]);
    p.rhs += assemble_vms_rhs(ds, g, nu_t);
  }
  p.constrained = constrained_values(d, t1, data);
  // Linear extrapolation in time is a cheaper starting iterate than u^n.
  const Vector start = s.has_previous ? Vector(2.0 * s.velocity[i] - s.previous[i]) : s.velocity[i];
  p.guess = saddle_vector(ds, start, s.pressure[i]);
  overwrite_constrained(ds, p.guess, p.constrained);
  return p;
}

Stepper::Layout& Stepper::layout(const std::vector<Domain>& domains, const SparseMatrix& fixed) {
  const int slot = domains.size() == 2 ? 2 : index(domains[0]);
  std::unique_ptr<Layout>& cached = layouts_[slot];
  if (!cached) {
    auto l = std::make_unique<Layout>();
    l->offset.assign(domains.size() + 1, 0);
    l->free_offset.assign(domains.size() + 1, 0);
    for (std::size_t k = 0; k < domains.size(); ++k) {
      const DomainSpace& ds = (*space_)[domains[k]];
      l->offset[k + 1] = l->offset[k] + ds.system_size();
      l->free_offset[k + 1] = l->free_offset[k] + ds.free_count();
    }
    l->n = l->offset.back();
    l->free_count = l->free_offset.back();
    l->free_index.resize(l->n);
    for (std::size_t k = 0; k < domains.size(); ++k) {
      const DomainSpace& ds = (*space_)[domains[k]];
      for (int i = 0; i < ds.system_size(); ++i) {
        const int f = ds.free_index()[i];
        l->free_index[l->offset[k] + i] = f < 0 ? -1 : f + l->free_offset[k];
      }
    }
    Triplets t;
    for (std::size_t k = 0; k < domains.size(); ++k) {
      const SparseMatrix& scalar = convection_[index(domains[k])].scalar_pattern();
      const int np2 = (*space_)[domains[k]].p2_node_count();
      for (int c = 0; c < 2; ++c) append_block(t, scalar, l->offset[k] + c * np2, l->offset[k] + c * np2, 0.0);
    }
    l->convection_pattern = from_triplets(l->n, l->n, t);
    cached = std::move(l);
  }
  Layout& l = *cached;
  SparseMatrix full = fixed + l.convection_pattern;
  full.makeCompressed();
  const bool same = l.pattern.nonZeros() == full.nonZeros() && l.pattern.rows() == full.rows() &&
                    std::equal(full.outerIndexPtr(), full.outerIndexPtr() + l.n + 1, l.pattern.outerIndexPtr()) &&
                    std::equal(full.innerIndexPtr(), full.innerIndexPtr() + full.nonZeros(), l.pattern.innerIndexPtr());
  if (!same) {
    l.pattern = full;
    const int* outer = full.outerIndexPtr();
    const int* inner = full.innerIndexPtr();
    l.reduced_slot.assign(full.nonZeros(), -1);
    l.lifting.clear();
    l.reduced.resize(l.free_count, l.free_count);
    l.reduced.reserve(full.nonZeros());
    int count = 0;
    for (int r = 0; r < l.n; ++r) {
      const int fr = l.free_index[r];
      if (fr < 0) continue;
      l.reduced.startVec(fr);
      for (int k = outer[r]; k < outer[r + 1]; ++k) {
        const int fc = l.free_index[inner[k]];
        if (fc >= 0) {
          l.reduced.insertBack(fr, fc) = 0.0;
          l.reduced_slot[k] = count++;
        } else {
          l.lifting.push_back({k, fr, inner[k]});
        }
      }
    }
    l.reduced.finalize();
    l.reduced.makeCompressed();
    l.convection_slot.assign(domains.size(), {});
    for (std::size_t k = 0; k < domains.size(); ++k) {
      const SparseMatrix& scalar = convection_[index(domains[k])].scalar_pattern();
      const int np2 = (*space_)[domains[k]].p2_node_count();
      for (int c = 0; c < 2; ++c) {
        auto& slots = l.convection_slot[k][c];
        slots.resize(scalar.nonZeros());
        for (int r = 0; r < np2; ++r) {
          const int row = l.offset[k] + c * np2 + r;
          for (int q = scalar.outerIndexPtr()[r]; q < scalar.outerIndexPtr()[r + 1]; ++q) {
            const int col = l.offset[k] + c * np2 + scalar.innerIndexPtr()[q];
            slots[q] = static_cast<int>(std::lower_bound(inner + outer[row], inner + outer[row + 1], col) - inner);
          }
        }
      }
    }
  }
  l.values.assign(full.valuePtr(), full.valuePtr() + full.nonZeros());
  return l;
}

std::vector<Vector> Stepper::picard(std::vector<DomainProblem>& problems, const std::array<SparseMatrix, 2>* cross,
                                    Factorization& factorization, bool linearised, PicardOutcome& outcome) {
  std::vector<Domain> domains;
  std::vector<int> offset(problems.size() + 1, 0);
  for (std::size_t k = 0; k < problems.size(); ++k) {
    domains.push_back(problems[k].domain);
    offset[k + 1] = offset[k] + (*space_)[problems[k].domain].system_size();
  }
  const int n = offset.back();

  // Everything except convection is fixed for the whole nonlinear solve.
  Triplets fixed_entries;
  Vector constrained(n), x(n), rhs = Vector::Zero(n);
  for (std::size_t k = 0; k < problems.size(); ++k) {
    const Domain d = problems[k].domain;
    const DomainSpace& ds = (*space_)[d];
    const int nu = ds.velocity_dofs();
    append_block(fixed_entries, divergence_[index(d)], offset[k] + nu, offset[k]);
    append_transposed(fixed_entries, divergence_[index(d)], offset[k], offset[k] + nu, -1.0);
    append_block(fixed_entries, problems[k].fixed, offset[k], offset[k]);
    constrained.segment(offset[k], ds.system_size()) = problems[k].constrained;
    x.segment(offset[k], ds.system_size()) = problems[k].guess;
    rhs.segment(offset[k], nu) = problems[k].rhs;
  }
  if (cross && problems.size() == 2) {
    append_block(fixed_entries, (*cross)[index(problems[0].domain)], offset[0], offset[1]);
    append_block(fixed_entries, (*cross)[index(problems[1].domain)], offset[1], offset[0]);
  }
  Layout& l = layout(domains, from_triplets(n, n, fixed_entries));

  Vector base_rhs(l.free_count);
  for (int i = 0; i < n; ++i)
    if (l.free_index[i] >= 0) base_rhs[l.free_index[i]] = rhs[i];
  Vector xr(l.free_count);
  for (int i = 0; i < n; ++i)
    if (l.free_index[i] >= 0) xr[l.free_index[i]] = x[i];

  std::vector<double> history, values, scalar;
  outcome = PicardOutcome{};
  // A factorization left over from an earlier solve of the same system layout
  // serves as the correction operator until it stops contracting the residual.
  bool stale = linearised || !config_.reuse_factorization || factorization.size() != l.free_count;
  bool lagged = false;
  Vector sys_rhs(l.free_count);
  for (int k = 0;; ++k) {
    values = l.values;
    for (std::size_t p = 0; p < problems.size(); ++p) {
      const DomainSpace& ds = (*space_)[problems[p].domain];
      const Vector w = linearised ? problems[p].advecting : Vector(x.segment(offset[p], ds.velocity_dofs()));
      convection_[index(problems[p].domain)].assemble(w, scalar);
      for (int c = 0; c < 2; ++c) {
        const auto& slots = l.convection_slot[p][c];
        for (std::size_t q = 0; q < slots.size(); ++q) values[slots[q]] += scalar[q];
      }
    }
    double* reduced_values = l.reduced.valuePtr();
    for (std::size_t j = 0; j < values.size(); ++j)
      if (l.reduced_slot[j] >= 0) reduced_values[l.reduced_slot[j]] = values[j];
    sys_rhs = base_rhs;
    for (const auto& [j, row, col] : l.lifting) sys_rhs[row] -= values[j] * constrained[col];

    const Vector r = sys_rhs - l.reduced * xr;
    const double bnorm = sys_rhs.norm();
    const double rel = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
    history.push_back(rel);
    outcome.residual = rel;

    if (!std::isfinite(rel)) throw PicardDivergence(history, "nonlinear residual is not finite");
    if (linearised && k > 0) break;
    if (!linearised) {
      if (rel <= config_.picard_tol) break;
      if (k >= config_.picard_max) {
        std::ostringstream msg;
        msg << "picard iteration cap " << config_.picard_max << " reached, residual " << rel;
        throw PicardDivergence(history, msg.str());
      }
      if (increasing_tail(history, 5)) throw PicardDivergence(history, "nonlinear residual grew for 5 iterations");
      if (lagged && k > 0 && rel > kStaleContraction * history[k - 1]) stale = true;
    }
    lagged = !stale;
    if (stale) {
      factorization.refactor(l.reduced);
      ++outcome.factorizations;
      stale = false;
    }
    xr += factorization.solve(r);
    x = expand(xr, constrained, l.free_index);
    ++outcome.iterations;
    if (!x.allFinite()) throw PicardDivergence(history, "linear solve produced non-finite values");
  }

  std::vector<Vector> out;
  for (std::size_t k = 0; k < problems.size(); ++k)
    out.push_back(x.segment(offset[k], offset[k + 1] - offset[k]));
  return out;
}

State Stepper::finish(const State& s, const std::vector<Vector>& saddle, bool vms) const {
  State next;
  next.time = s.time + config_.dt;
  next.level = s.level + 1;
  next.previous = s.velocity;
  next.has_previous = true;
  for (Domain d : kDomains) {
    const int i = index(d);
    const DomainSpace& ds = (*space_)[d];
    next.velocity[i] = saddle[i].head(ds.velocity_dofs());
    Vector p = saddle[i].tail(ds.pressure_dofs());
    if (ds.pinned_pressure()) {
      const Vector ones = Vector::Ones(ds.pressure_dofs());
      const Vector m1 = p1_mass_[i] * ones;
      p.array() -= m1.dot(p) / m1.sum();
    }
    next.pressure[i] = p;
    if (vms) next.large_scale[i] = projector(d).project(next.velocity[i]);
  }
  return next;
}

State Stepper::step_decoupled(const State& s, const ProblemData& data, InterfaceCoupling coupling, bool vms,
                              StepStats* stats) {
  const bool bootstrap = coupling == InterfaceCoupling::imex;
  if (!bootstrap && !s.has_previous) throw std::logic_error("geometric averaging needs two time levels");
  const InterfaceTrace trace = sample_interface_trace(*space_, s.velocity, bootstrap ? nullptr : &s.previous);
  const auto scale = vms ? config_.interface_scale() : std::array<double, 2>{1.0, 1.0};
  const InterfaceBlocks blocks = assemble_interface_blocks(*space_, trace, config_.kappa, coupling, scale);
  const double nu_t = vms ? config_.nu_t : 0.0;

  std::vector<Vector> saddle(2);
  for (Domain d : kDomains) {
    const int i = index(d);
    std::vector<DomainProblem> problems{
        domain_problem(d, s, data, nu_t, blocks.implicit[i], blocks.explicit_rhs[i])};
    problems[0].advecting = s.velocity[i];
    PicardOutcome outcome;
    saddle[i] = picard(problems, nullptr, domain_factorization_[i], bootstrap, outcome)[0];
    if (stats) {
      stats->picard_iterations[i] = outcome.iterations;
      stats->factorizations[i] = outcome.factorizations;
      stats->final_residual[i] = outcome.residual;
    }
  }
  return finish(s, saddle, vms);
}

State Stepper::step_monolithic(const State& s, const ProblemData& data, bool vms, StepStats* stats) {
  const InterfaceTrace trace = sample_interface_trace(*space_, s.velocity);
  const InterfaceBlocks blocks =
      assemble_interface_blocks(*space_, trace, config_.kappa, InterfaceCoupling::monolithic);
  const double nu_t = vms ? config_.nu_t : 0.0;
  std::vector<DomainProblem> problems;
  for (Domain d : kDomains)
    problems.push_back(domain_problem(d, s, data, nu_t, blocks.implicit[index(d)], blocks.explicit_rhs[index(d)]));
  PicardOutcome outcome;
  const std::vector<Vector> saddle = picard(problems, &blocks.cross, coupled_factorization_, false, outcome);
  if (stats) {
    stats->picard_iterations = {outcome.iterations, outcome.iterations};
    stats->factorizations = {outcome.factorizations, outcome.factorizations};
    stats->final_residual = {outcome.residual, outcome.residual};
  }
  return finish(s, saddle, vms);
}

State Stepper::imex_bootstrap(const State& s0, const ProblemData& data, StepStats* stats) {
  return step_decoupled(s0, data, InterfaceCoupling::imex, is_vms(config_.scheme), stats);
}

State Stepper::step_ga(const State& s, const ProblemData& data, StepStats* stats) {
  return step_decoupled(s, data, InterfaceCoupling::geometric_average, false, stats);
}

State Stepper::step_ga_vms(const State& s, const ProblemData& data, StepStats* stats) {
  return step_decoupled(s, data, InterfaceCoupling::geometric_average, true, stats);
}

State Stepper::step_twm(const State& s, const ProblemData& data, StepStats* stats) {
  return step_monolithic(s, data, false, stats);
}

State Stepper::step_twm_vms(const State& s, const ProblemData& data, StepStats* stats) {
  return step_monolithic(s, data, true, stats);
}

State Stepper::step(const State& s, const ProblemData& data, StepStats* stats) {
  switch (config_.scheme) {
    case SchemeKind::ga: return step_ga(s, data, stats);
    case SchemeKind::ga_vms:
    case SchemeKind::ga_vms_alt: return step_ga_vms(s, data, stats);
    case SchemeKind::twm: return step_twm(s, data, stats);
    case SchemeKind::twm_vms: return step_twm_vms(s, data, stats);
  }
  throw std::logic_error("unhandled scheme");
}

State imex_bootstrap(const Space& space, const SchemeConfig& config, const State& s0, const ProblemData& data) {
  return Stepper(space, config).imex_bootstrap(s0, data);
}
State step_ga(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data) {
  return Stepper(space, config).step_ga(s, data);
}
State step_ga_vms(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data) {
  return Stepper(space, config).step_ga_vms(s, data);
}
State step_twm(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data) {
  return Stepper(space, config).step_twm(s, data);
}
State step_twm_vms(const Space& space, const SchemeConfig& config, const State& s, const ProblemData& data) {
  return Stepper(space, config).step_twm_vms(s, data);
}

RunSummary run(const Space& space, const SchemeConfig& config, const ProblemData& data, const InitialData& initial,
               const Observer& observer) {
  const auto start = std::chrono::steady_clock::now();
  const int steps = step_count(config.t_end, config.dt);
  Stepper stepper(space, config);
  RunSummary summary;
  auto finish_summary = [&] {
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
  };

  if (!initial.velocity) throw std::invalid_argument("initial velocity missing");
  State s = stepper.initial_state(initial.velocity, data);
  if (observer) observer(s);

  auto accept = [&](State next, const StepStats& stats) {
    summary.picard_iterations += stats.picard_iterations[0] + stats.picard_iterations[1];
    summary.factorizations += stats.factorizations[0] + stats.factorizations[1];
    for (Domain d : kDomains) {
      const double norm = stepper.l2_norm(d, next.velocity[index(d)]);
      if (!(norm <= config.blowup_norm)) {
        summary.status = RunStatus::blew_up;
        summary.failure_time = next.time;
        summary.message = std::string(d == Domain::atmosphere ? "atmosphere" : "ocean") + " norm " +
                          std::to_string(norm) + " exceeds " + std::to_string(config.blowup_norm);
        if (observer) observer(next);
        return false;
      }
    }
    s = std::move(next);
    ++summary.steps;
    summary.final_time = s.time;
    if (observer) observer(s);
    return true;
  };

  try {
    if (!is_monolithic(config.scheme) && steps >= 1) {
      StepStats stats;
      State next = initial.second_level
                       ? stepper.with_second_level(s, interpolate_pair(space, initial.second_level, config.dt), data)
                       : stepper.imex_bootstrap(s, data, &stats);
      if (!accept(std::move(next), stats)) return finish_summary();
    }
    while (summary.steps < steps) {
      StepStats stats;
      State next = stepper.step(s, data, &stats);
      if (!accept(std::move(next), stats)) return finish_summary();
    }
  } catch (const PicardDivergence& e) {
    summary.status = RunStatus::picard_diverged;
    summary.failure_time = s.time + config.dt;
    summary.message = e.what();
  }
  return finish_summary();
}

}  // namespace gavms

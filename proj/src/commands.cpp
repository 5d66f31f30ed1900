#include "gavms/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "gavms/experiments.hpp"

namespace gavms {

namespace fs = std::filesystem;

ManufacturedProblem manufactured_problem(const RunConfig& config) {
  ManufacturedProblem p;
  p.a = config.a;
  p.b = config.b;
  p.kappa = config.kappa;
  p.nu1 = config.nu1;
  p.nu2 = config.nu2;
  return p;
}

CoupledMesh build_mesh(const RunConfig& config, int n) {
  return config.mesh_kind == MeshKind::step ? generate_step_mesh(config.mesh_h) : generate_two_domain_mesh(n);
}

ConvergenceRow convergence_level(const RunConfig& config, SchemeKind scheme, int n) {
  const Space space = build_space(generate_two_domain_mesh(n));
  const SchemeConfig sc = config.scheme_config(scheme, n);
  const ManufacturedProblem problem = manufactured_problem(config);
  ErrorAccumulator errors(problem, sc.dt);
  const RunSummary summary =
      run(space, sc, manufactured_data(problem), manufactured_initial(problem, config.exact_second_level),
          [&](const State& s) {
            if (s.level > 0) errors.add(space, s.velocity, s.time);
          });
  ConvergenceRow row;
  row.n = n;
  row.h = 1.0 / n;
  row.dt = sc.dt;
  row.converged = summary.status == RunStatus::completed;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  row.l2l2 = row.converged ? errors.l2l2() : nan;
  row.l2h1 = row.converged ? errors.l2h1() : nan;
  return row;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config, SchemeKind scheme, std::ostream* log) {
  std::vector<ConvergenceRow> rows;
  for (int n : config.refinement) {
    rows.push_back(convergence_level(config, scheme, n));
    if (log) {
      const ConvergenceRow& r = rows.back();
      *log << "  N=" << n << "  L2L2=" << r.l2l2 << "  L2H1=" << r.l2h1 << (r.converged ? "" : "  (diverged)") << '\n'
           << std::flush;
    }
  }
  return convergence_rates(rows);
}

std::vector<EnergyRun> energy_experiment(const RunConfig& config) {
  const Space space = build_space(build_mesh(config, config.mesh_n));
  ProblemData data;
  InitialData init;
  init.velocity = rotating_initial_field();
  std::vector<EnergyRun> runs;
  for (SchemeKind scheme : config.schemes) {
    const SchemeConfig sc = config.scheme_config(scheme, config.mesh_n);
    EnergyMonitor monitor(space, sc);
    EnergyRun r;
    r.scheme = scheme;
    r.summary = run(space, sc, data, init, monitor.observer());
    r.samples = monitor.samples();
    runs.push_back(std::move(r));
  }
  return runs;
}

std::vector<StepRun> step_experiment(const RunConfig& config, const std::string& snapshot_dir) {
  const Space space = build_space(build_mesh(config, config.mesh_n));
  const ProblemData data = step_data(config.inflow);
  InitialData init;
  init.velocity = [](Domain, double, Vec2) { return Vec2{}; };
  std::array<SparseMatrix, 2> mass;
  for (Domain d : kDomains) mass[index(d)] = assemble_mass(space[d]);
  if (!snapshot_dir.empty() && config.snapshot_every > 0) fs::create_directories(snapshot_dir);

  std::vector<StepRun> runs;
  for (SchemeKind scheme : config.schemes) {
    SchemeConfig sc = config.scheme_config(scheme, config.mesh_n);
    StepRun r;
    r.scheme = scheme;
    auto observe = [&](const State& s) {
      StepTraceRow row;
      row.time = s.time;
      for (Domain d : kDomains) {
        const int i = index(d);
        row.norm[i] = std::sqrt(std::max(0.0, s.velocity[i].dot(mass[i] * s.velocity[i])));
        if (!(row.norm[i] <= sc.blowup_norm)) row.blown_up = true;
      }
      r.trace.push_back(row);
      if (snapshot_dir.empty() || config.snapshot_every <= 0 || s.level == 0 || s.level % config.snapshot_every)
        return;
      for (Domain d : kDomains) {
        std::ostringstream name;
        name << to_string(scheme) << '_' << (d == Domain::atmosphere ? "atm" : "ocean") << '_' << std::setw(5)
             << std::setfill('0') << s.level << ".vtu";
        write_vtu(space[d], s.velocity[index(d)], s.pressure[index(d)], (fs::path(snapshot_dir) / name.str()).string());
      }
      ++r.snapshots;
    };
    r.summary = run(space, sc, data, init, observe);
    if (r.summary.status == RunStatus::picard_diverged) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      r.trace.push_back({r.summary.failure_time, {nan, nan}, true});
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

namespace {

fs::path prepare_output(const RunConfig& config) {
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::string rate_text(const std::optional<double>& r) {
  if (!r) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *r;
  return s.str();
}

void print_summary(std::ostream& out, SchemeKind scheme, const RunSummary& s) {
  out << std::left << std::setw(11) << to_string(scheme) << " status=" << to_string(s.status) << " steps=" << s.steps
      << " picard=" << s.picard_iterations << " factorizations=" << s.factorizations << std::fixed
      << std::setprecision(2) << " wall=" << s.wall_seconds << "s";
  if (s.status != RunStatus::completed) out << " failure_t=" << s.failure_time << " (" << s.message << ")";
  out << std::defaultfloat << std::setprecision(6) << '\n';
}

}  // namespace

int cmd_convergence(const RunConfig& config, std::ostream& out) {
  const fs::path dir = prepare_output(config);
  out << "convergence study, scheme " << to_string(config.scheme) << ", nu1=" << config.nu1 << " nu2=" << config.nu2
      << " a=" << config.a << '\n';
  const std::vector<ConvergenceRow> rows = convergence_study(config, config.scheme, &out);
  write_convergence_csv((dir / "convergence.csv").string(), rows);
  out << std::setw(6) << "N" << std::setw(14) << "L2L2" << std::setw(8) << "rate" << std::setw(14) << "L2H1"
      << std::setw(8) << "rate" << "  status\n";
  for (const ConvergenceRow& r : rows)
    out << std::setw(6) << r.n << std::setw(14) << std::scientific << std::setprecision(5) << r.l2l2 << std::setw(8)
        << rate_text(r.rate_l2) << std::setw(14) << std::scientific << r.l2h1 << std::setw(8) << rate_text(r.rate_h1)
        << "  " << (r.converged ? "converged" : "diverged") << std::defaultfloat << '\n';
  return exit_ok;
}

int cmd_energy(const RunConfig& config, std::ostream& out) {
  const fs::path dir = prepare_output(config);
  const std::vector<EnergyRun> runs = energy_experiment(config);
  bool failed = false;
  for (const EnergyRun& r : runs) {
    write_energy_csv((dir / ("energy_" + to_string(r.scheme) + ".csv")).string(), r.samples);
    print_summary(out, r.scheme, r.summary);
    if (!r.samples.empty()) {
      const EnergySample& first = r.samples.front();
      const EnergySample& last = r.samples.back();
      out << "  t=" << last.time << "  AED=" << last.aed << "  KE+E atm " << first.total(Domain::atmosphere) << " -> "
          << last.total(Domain::atmosphere) << "  ocean " << first.total(Domain::ocean) << " -> "
          << last.total(Domain::ocean) << '\n';
    }
    failed = failed || r.summary.status != RunStatus::completed;
  }
  return failed ? exit_solver_failure : exit_ok;
}

int cmd_step(const RunConfig& config, std::ostream& out) {
  const fs::path dir = prepare_output(config);
  const std::vector<StepRun> runs = step_experiment(config, (dir / "snapshots").string());
  for (const StepRun& r : runs) {
    write_step_csv((dir / ("step_" + to_string(r.scheme) + ".csv")).string(), r.trace);
    print_summary(out, r.scheme, r.summary);
    double peak = 0.0;
    for (const StepTraceRow& row : r.trace)
      if (std::isfinite(row.norm[0])) peak = std::max({peak, row.norm[0], row.norm[1]});
    out << "  peak norm " << peak << ", " << r.snapshots << " snapshot sets\n";
  }
  return exit_ok;
}

}  // namespace gavms

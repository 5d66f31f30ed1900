#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "gavms/commands.hpp"

using namespace gavms;

int main(int argc, char** argv) {
  CLI::App app{"Coupled atmosphere-ocean flow with nonlinear interface friction"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir, scheme;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--scheme", scheme, "ga | ga-vms | ga-vms-alt | twm | twm-vms");
  };
  CLI::App* convergence = app.add_subcommand("convergence", "manufactured-solution convergence study");
  CLI::App* energy = app.add_subcommand("energy", "energy experiment from counter-rotating initial flows");
  CLI::App* step = app.add_subcommand("step", "flow over a backward-facing step");
  for (CLI::App* sub : {convergence, energy, step}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config_error;
  }

  const Experiment experiment = energy->parsed() ? Experiment::energy
                                : step->parsed() ? Experiment::step
                                                 : Experiment::convergence;
  RunConfig config;
  try {
    config = config_path.empty() ? defaults_for(experiment) : load_config(config_path, &experiment);
    if (!scheme.empty()) {
      config.scheme = parse_scheme(scheme);
      config.schemes = {config.scheme};
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    validate(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    switch (experiment) {
      case Experiment::convergence: return cmd_convergence(config, std::cout);
      case Experiment::energy: return cmd_energy(config, std::cout);
      case Experiment::step: return cmd_step(config, std::cout);
    }
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return exit_failure;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return exit_solver_failure;
  }
  return exit_ok;
}

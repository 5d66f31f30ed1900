#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "gavms/commands.hpp"

using namespace gavms;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gavms_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Config, DefaultsPerExperiment) {
  const RunConfig conv = defaults_for(Experiment::convergence);
  EXPECT_EQ(conv.refinement, (std::vector<int>{8, 16, 32, 64}));
  EXPECT_TRUE(conv.nu_t_is_h);
  EXPECT_TRUE(conv.dt_is_inverse_n);
  const RunConfig energy = defaults_for(Experiment::energy);
  EXPECT_DOUBLE_EQ(energy.nu1, 1.5e-3);
  EXPECT_DOUBLE_EQ(energy.dt, 0.01);
  EXPECT_EQ(energy.mesh_n, 32);
  const RunConfig step = defaults_for(Experiment::step);
  EXPECT_EQ(step.mesh_kind, MeshKind::step);
  EXPECT_DOUBLE_EQ(step.kappa, 2.45e-3);
  EXPECT_DOUBLE_EQ(step.nu_t, 0.01);
}

TEST(Config, ParsesKeysAndSentinels) {
  const RunConfig c = parse_config(
      "# low viscosity study\n"
      "experiment = convergence\n"
      "scheme = twm-vms\n"
      "nu1 = 5e-4   # atmosphere\n"
      "nu2 = 1e-4\n"
      "a = 1/5e-4\n"
      "nu_t = h\n"
      "dt = 1/N\n"
      "refinement = 4, 8,16\n"
      "picard.tol = 1e-12\n"
      "bootstrap = exact\n"
      "output.dir = results/low\n");
  EXPECT_EQ(c.scheme, SchemeKind::twm_vms);
  EXPECT_DOUBLE_EQ(c.a, 2000.0);
  EXPECT_EQ(c.refinement, (std::vector<int>{4, 8, 16}));
  EXPECT_TRUE(c.exact_second_level);
  EXPECT_EQ(c.output_dir, "results/low");
  const SchemeConfig sc = c.scheme_config(SchemeKind::twm_vms, 16);
  EXPECT_DOUBLE_EQ(sc.nu_t, 1.0 / 16);
  EXPECT_DOUBLE_EQ(sc.dt, 1.0 / 16);
  EXPECT_DOUBLE_EQ(sc.picard_tol, 1e-12);
}

TEST(Config, ExplicitValuesOverrideSentinels) {
  const Experiment e = Experiment::energy;
  const RunConfig c = parse_config("nu_t = 0.02\ndt = 1/32\nschemes = ga, ga-vms-alt\n", &e);
  EXPECT_FALSE(c.nu_t_is_h);
  EXPECT_DOUBLE_EQ(c.scheme_config(SchemeKind::ga, 8).nu_t, 0.02);
  EXPECT_DOUBLE_EQ(c.scheme_config(SchemeKind::ga, 8).dt, 1.0 / 32);
  EXPECT_EQ(c.schemes, (std::vector<SchemeKind>{SchemeKind::ga, SchemeKind::ga_vms_alt}));
}

TEST(Config, ShippedConfigsLoad) {
  const std::vector<std::pair<std::string, Experiment>> files{{"convergence_high.ini", Experiment::convergence},
                                                              {"convergence_low.ini", Experiment::convergence},
                                                              {"energy.ini", Experiment::energy},
                                                              {"step.ini", Experiment::step}};
  for (const auto& [name, e] : files) {
    const RunConfig c = load_config(std::string(GAVMS_CONFIG_DIR) + "/" + name, &e);
    EXPECT_EQ(c.experiment, e) << name;
  }
  const RunConfig high = load_config(std::string(GAVMS_CONFIG_DIR) + "/convergence_high.ini");
  EXPECT_TRUE(high.exact_second_level);
  EXPECT_DOUBLE_EQ(high.nu1, 0.5);
}

TEST(Config, Errors) {
  const Experiment step = Experiment::step;
  for (const char* bad : {"nu1 = fast\n", "nu1 = 1\nnu1 = 2\n", "bogus = 1\n", "nu1 =\n", "nu1\n", "nu1 = -1\n",
                          "scheme = xyz\n", "refinement = 8, 12\n", "dt = 1/0\n", "convection = upwind\n",
                          "mesh.kind = step\n", "picard.max = 0\n"})
    EXPECT_THROW(parse_config(bad), ConfigError) << bad;
  EXPECT_THROW(parse_config("experiment = energy\n", &step), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST(Output, FormatNumberRoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 1.0 / 3.0, 1e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST_F(TempDir, VtuStructure) {
  const Space space = build_space(generate_two_domain_mesh(1));
  const DomainSpace& ds = space[Domain::ocean];
  Vector u = Vector::Zero(ds.velocity_dofs());
  u[ds.velocity_dof(0, 1)] = 0.25;
  u[ds.velocity_dof(1, 1)] = -1.0 / 3.0;
  const Vector p = Vector::Constant(ds.vertex_count(), 2.0);
  const fs::path file = dir_ / "ocean.vtu";
  write_vtu(ds, u, p, file.string());
  const std::string text = read_file(file);
  EXPECT_NE(text.find("type=\"UnstructuredGrid\""), std::string::npos);
  EXPECT_NE(text.find("NumberOfPoints=\"4\" NumberOfCells=\"2\""), std::string::npos);
  EXPECT_NE(text.find("Name=\"velocity\" NumberOfComponents=\"3\""), std::string::npos);
  EXPECT_NE(text.find("Name=\"pressure\""), std::string::npos);
  EXPECT_NE(text.find("0.25 -0.3333333333333333 0\n"), std::string::npos);
  EXPECT_NE(text.find("Name=\"types\""), std::string::npos);
  const std::vector<std::string> ls = lines(text);
  int types = 0;
  for (const std::string& l : ls)
    if (l == "          5") ++types;
  EXPECT_EQ(types, 2);
  EXPECT_NE(text.find("1 -1 0\n"), std::string::npos);  // a corner of the ocean square
  EXPECT_THROW(write_vtu(ds, Vector::Zero(3), p, file.string()), std::invalid_argument);
  EXPECT_THROW(write_vtu(ds, u, p, (dir_ / "missing" / "x.vtu").string()), std::runtime_error);
}

TEST_F(TempDir, CsvSchemas) {
  std::vector<ConvergenceRow> rows(1);
  rows[0].n = 8;
  rows[0].h = 0.125;
  rows[0].dt = 0.125;
  rows[0].l2l2 = 1e-3;
  rows[0].l2h1 = 1e-2;
  write_convergence_csv((dir_ / "c.csv").string(), rows);
  EXPECT_EQ(read_file(dir_ / "c.csv"), "N,h,dt,err_l2l2,rate_l2,err_l2h1,rate_h1,status\n"
                                       "8,0.125,0.125,0.001,,0.01,,converged\n");

  EnergySample e;
  e.time = 0.5;
  e.kinetic = {1.0, 2.0};
  e.dissipation = {0.25, 0.5};
  e.aed = 0.125;
  write_energy_csv((dir_ / "e.csv").string(), {e});
  EXPECT_EQ(read_file(dir_ / "e.csv"), "t,ke_atm,ke_ocean,diss_atm,diss_ocean,aed,total_atm,total_ocean\n"
                                       "0.5,1,2,0.25,0.5,0.125,1.25,2.5\n");

  write_step_csv((dir_ / "s.csv").string(), {{1.0, {2.0, 3.0}, false}, {1.5, {NAN, NAN}, true}});
  const auto ls = lines(read_file(dir_ / "s.csv"));
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "t,norm_atm,norm_ocean,blowup_flag");
  EXPECT_EQ(ls[1], "1,2,3,0");
  EXPECT_EQ(ls[2].substr(ls[2].size() - 2), ",1");
}

TEST_F(TempDir, ConvergenceSingleLevelHasBlankRates) {
  RunConfig c = defaults_for(Experiment::convergence);
  c.refinement = {4};
  c.output_dir = dir_.string();
  std::ostringstream log;
  EXPECT_EQ(cmd_convergence(c, log), exit_ok);
  const auto ls = lines(read_file(dir_ / "convergence.csv"));
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1].substr(0, 12), "4,0.25,0.25,");
  EXPECT_NE(ls[1].find(",,"), std::string::npos);
  EXPECT_EQ(ls[1].substr(ls[1].size() - 9), "converged");
}

TEST_F(TempDir, EnergySingleStepWritesTwoRows) {
  RunConfig c = defaults_for(Experiment::energy);
  c.mesh_n = 4;
  c.t_end = c.dt;
  c.schemes = {SchemeKind::ga_vms};
  c.output_dir = dir_.string();
  std::ostringstream log;
  EXPECT_EQ(cmd_energy(c, log), exit_ok);
  const auto ls = lines(read_file(dir_ / "energy_ga-vms.csv"));
  EXPECT_EQ(ls.size(), 3u);
}

TEST_F(TempDir, StepWithoutInflowStaysAtRest) {
  RunConfig c = defaults_for(Experiment::step);
  c.mesh_h = 0.5;
  c.inflow = 0.0;
  c.t_end = 10.0;
  c.snapshot_every = 100;
  c.schemes = {SchemeKind::ga_vms};
  c.output_dir = dir_.string();
  std::ostringstream log;
  EXPECT_EQ(cmd_step(c, log), exit_ok);
  int vtu = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "snapshots")) vtu += entry.path().extension() == ".vtu";
  EXPECT_EQ(vtu, 20);  // 10 snapshot sets, one file per domain
  EXPECT_TRUE(fs::exists(dir_ / "snapshots" / "ga-vms_atm_01000.vtu"));
  const auto ls = lines(read_file(dir_ / "step_ga-vms.csv"));
  ASSERT_EQ(ls.size(), 1002u);
  for (std::size_t k = 1; k < ls.size(); ++k) EXPECT_EQ(ls[k].substr(ls[k].find(',')), ",0,0,0");
}

TEST_F(TempDir, OutputIsDeterministic) {
  RunConfig c = defaults_for(Experiment::energy);
  c.mesh_n = 4;
  c.t_end = 0.1;
  c.schemes = {SchemeKind::ga};
  std::ostringstream log;
  std::array<std::string, 2> text;
  for (int k = 0; k < 2; ++k) {
    c.output_dir = (dir_ / std::to_string(k)).string();
    cmd_energy(c, log);
    text[k] = read_file(dir_ / std::to_string(k) / "energy_ga.csv");
  }
  EXPECT_FALSE(text[0].empty());
  EXPECT_EQ(text[0], text[1]);
}

#ifdef GAVMS_CLI_PATH
TEST_F(TempDir, CliExitCodes) {
  auto status = [&](const std::string& args) {
    const std::string cmd = std::string(GAVMS_CLI_PATH) + " " + args + " > " + (dir_ / "log.txt").string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const fs::path cfg = dir_ / "run.ini";
  std::ofstream(cfg) << "mesh.n = 2\nt_end = 0.01\nschemes = ga\n";
  EXPECT_EQ(status("energy --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "energy_ga.csv"));

  std::ofstream(dir_ / "bad.ini") << "nonsense = 1\n";
  EXPECT_EQ(status("energy --config " + (dir_ / "bad.ini").string()), 2);
  EXPECT_EQ(status("energy --scheme nope"), 2);
  EXPECT_EQ(status("nosuchcommand"), 2);

  std::ofstream(dir_ / "fail.ini") << "mesh.n = 4\nt_end = 0.05\nschemes = ga\npicard.max = 1\npicard.tol = 1e-15\n";
  EXPECT_EQ(status("energy --config " + (dir_ / "fail.ini").string() + " --out " + (dir_ / "out2").string()), 3);
}
#endif

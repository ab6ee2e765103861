#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "patchdg/errors.hpp"
#include "patchdg/experiment.hpp"

using namespace patchdg;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::path(::testing::TempDir()) / ("patchdg_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PATCHDG_CLI_PATH) + " -q " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesKeyValueLines) {
  std::istringstream in(
      "# comment\n"
      "problem = example3\n"
      "order = 3\n"
      "n = 10, 20\n"
      "\n"
      "patch_size = 20\n"
      "eta = 100\n"
      "penalty-scaling = none\n"
      "patch-rule = collocation\n"
      "quad-order = 8\n"
      "interface = ellipse\n"
      "params = 2, 3\n");
  const RunConfig cfg = read_config(in);
  EXPECT_EQ(cfg.problem, "example3");
  EXPECT_EQ(cfg.order, 3);
  EXPECT_EQ(cfg.n, (std::vector<int>{10, 20}));
  EXPECT_EQ(cfg.patch_size, 20);
  EXPECT_EQ(cfg.eta, 100.0);
  EXPECT_FALSE(cfg.penalty_scaled_by_beta);
  EXPECT_EQ(cfg.patch_rule, PatchRule::CollocationCount);
  EXPECT_EQ(cfg.quad_order, 8);
  EXPECT_EQ(cfg.interface, "ellipse");
  EXPECT_EQ(cfg.interface_params, (std::vector<double>{2.0, 3.0}));
}

TEST(Config, RejectsBadInput) {
  RunConfig cfg;
  EXPECT_THROW(apply_setting(cfg, "colour", "blue"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "order", "two"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "n", "10,x"), ConfigError);
  EXPECT_THROW(apply_setting(cfg, "patch-rule", "sometimes"), ConfigError);
  std::istringstream missing_eq("order 2\n");
  EXPECT_THROW(read_config(missing_eq), ConfigError);
}

TEST(Config, ValidationRejectsLinearSpaceAndEmptyList) {
  RunConfig cfg;
  cfg.order = 1;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg.order = 2;
  cfg.n.clear();
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg.n = {10};
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Run, CsvSchemaAndReproducibility) {
  RunConfig cfg;
  cfg.n = {10, 20};
  cfg.output = temp_path("run1.csv");
  const RunResult r = run_convergence(cfg);
  ASSERT_EQ(r.table.size(), 2u);
  const auto first = csv_cells(slurp(cfg.output));
  ASSERT_EQ(first.size(), 3u);
  EXPECT_EQ(first[0], (std::vector<std::string>{"h", "dofs", "energy_err", "dg_err", "l2_err", "eoc_energy", "eoc_l2",
                                                 "assemble_ms", "solve_ms"}));
  EXPECT_EQ(first[1].size(), 9u);
  EXPECT_EQ(first[1][5], "");
  EXPECT_EQ(first[1][6], "");
  EXPECT_FALSE(first[2][5].empty());
  EXPECT_NEAR(std::stod(first[1][0]), 2.0 * std::sqrt(2.0) / 10.0, 1e-15);

  cfg.output = temp_path("run2.csv");
  run_convergence(cfg);
  const auto second = csv_cells(slurp(cfg.output));
  ASSERT_EQ(second.size(), first.size());
  // Everything but the wall-clock columns is byte-identical.
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(first[i][j], second[i][j]) << "row " << i << " col " << j;
  }
  for (const auto& d : r.levels) {
    EXPECT_LE(d.symmetry_defect, 1e-12);
    EXPECT_LE(d.galerkin_residual, 1e-9);
    EXPECT_GT(d.min_pivot, 0.0);
  }
}

TEST(Run, SingleLevelWithRefinements) {
  RunConfig cfg;
  cfg.problem = "cubic";
  cfg.order = 3;
  cfg.n = {10};
  cfg.refinements = 1;
  const RunResult r = run_convergence(cfg);
  ASSERT_EQ(r.table.size(), 2u);
  EXPECT_LE(r.table.rows()[1].energy_error, 1e-7);
}

TEST(Run, DumpsTheLinearSystem) {
  RunConfig cfg;
  cfg.n = {10};
  cfg.dump_system = temp_path("dump");
  run_convergence(cfg);
  const std::string a = slurp(temp_path("dump.0.A")), b = slurp(temp_path("dump.0.b"));
  EXPECT_FALSE(a.empty());
  std::istringstream bs(b);
  long i = -1;
  double v = 0.0;
  bs >> i >> v;
  EXPECT_EQ(i, 0);
}

TEST(Run, MeshFileInput) {
  const auto path = temp_path("mesh.txt");
  {
    std::ofstream out(path);
    Mesh::structured({Vec2(-1, -1), Vec2(1, 1)}, 10).write(out);
  }
  RunConfig cfg;
  cfg.mesh_file = path;
  cfg.refinements = 1;
  const RunResult r = run_convergence(cfg);
  ASSERT_EQ(r.table.size(), 2u);
  EXPECT_LT(r.table.rows()[1].energy_error, r.table.rows()[0].energy_error);
}

TEST(Run, ErrorsCarryTheStageAndMapToExitCodes) {
  RunConfig cfg;
  cfg.order = 3;
  cfg.eta = 1e-6;
  cfg.n = {20};
  try {
    run_convergence(cfg);
    FAIL() << "expected a solver failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("solve"), std::string::npos);
    EXPECT_EQ(exit_code_for(e), 4);
  }
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(AssumptionViolation(2, "x")), 3);
  EXPECT_EQ(exit_code_for(NotPositiveDefinite(3, -1.0)), 4);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("--problem example1 --order 2 --n 10"), 0);
  EXPECT_EQ(run_cli("--order 1 --n 10"), 2);
  EXPECT_EQ(run_cli("--bogus-flag 3"), 2);
  EXPECT_EQ(run_cli("--problem example1 --order 3 --eta 1e-6 --n 20"), 4);
  EXPECT_EQ(run_cli("--problem example4 --order 2 --n 20"), 3);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const auto cfg_path = temp_path("override.cfg");
  const auto csv = temp_path("override.csv");
  {
    std::ofstream out(cfg_path);
    out << "problem = example1\norder = 1\nn = 10\noutput = " << csv.string() << "\n";
  }
  EXPECT_EQ(run_cli("--config " + cfg_path.string()), 2);
  EXPECT_EQ(run_cli("--config " + cfg_path.string() + " --order 2"), 0);
  EXPECT_EQ(csv_cells(slurp(csv)).size(), 2u);
}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patchdg/analysis.hpp"
#include "patchdg/bench_problems.hpp"

namespace patchdg {

struct RunConfig {
  std::string problem = "example1";
  int order = 2;
  /// Structured subdivisions per axis, one run each.
  std::vector<int> n{10, 20, 40, 80};
  /// With a mesh file: number of uniform refinements after the first run.
  int refinements = 0;
  std::optional<double> eta;
  std::optional<int> patch_size;
  std::optional<PatchRule> patch_rule;
  /// Penalty weights scaled by beta ("beta") or not ("none").
  bool penalty_scaled_by_beta = true;
  /// 0 selects 2m.
  int quad_order = 0;
  double geom_tol = 1e-3;
  /// Interface override: circle (cx, cy, r), ellipse (a, b) or star
  /// (r0, amplitude, petals). Empty keeps the problem's own interface.
  std::string interface;
  std::vector<double> interface_params;
  std::filesystem::path output;
  std::filesystem::path mesh_file;
  /// Prefix for `<prefix>.<level>.A` / `<prefix>.<level>.b` dumps.
  std::filesystem::path dump_system;
};

/// Sets one field from its textual form. Keys are the long flag names
/// without dashes (`patch-size` and `patch_size` are both accepted). Throws
/// ConfigError on unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// `key = value` lines, `#` comments, blank lines ignored.
RunConfig read_config(std::istream& in, RunConfig base = {});
RunConfig read_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Throws ConfigError unless the configuration is runnable.
void validate(const RunConfig& cfg);

/// Per-level solver and consistency diagnostics.
struct LevelDiagnostics {
  int elements = 0;
  int cut_elements = 0;
  double symmetry_defect = 0.0;
  double galerkin_residual = 0.0;
  double min_pivot = 0.0;
  double vertex_perturbation = 0.0;
};

struct RunResult {
  ConvergenceTable table;
  std::vector<LevelDiagnostics> levels;
};

/// Mesh sequence -> classify -> reconstruct -> assemble -> solve -> errors.
/// Writes the CSV when cfg.output is set and progress lines to `log` if not
/// null. Library errors propagate with the failing stage prefixed.
RunResult run_convergence(const RunConfig& cfg, std::ostream* log = nullptr);

/// Header `h,dofs,energy_err,dg_err,l2_err,eoc_energy,eoc_l2,assemble_ms,solve_ms`;
/// 17 significant digits, EOC cells empty on the first row.
void write_csv(const ConvergenceTable& table, std::ostream& out);

/// Process exit code for an exception escaping run_convergence: 2 for
/// configuration errors, 3 for violated mesh or patch assumptions, 4 for
/// solver failures, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace patchdg

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "patchdg/errors.hpp"
#include "patchdg/experiment.hpp"

namespace {

void print_error(const std::exception& e, int depth = 0) {
  std::cerr << std::string(2 * depth, ' ') << "error: " << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_error(inner, depth + 1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patch-reconstruction DG solver for biharmonic interface problems"};
  app.set_version_flag("--version", "0.1.0");

  // Every flag is kept as text and routed through the same parser as the
  // config file, so that flags override file entries.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"problem", "example1|example2|example3|example4|cubic"},
      {"order", "reconstruction degree m >= 2"},
      {"n", "comma-separated subdivisions per axis, e.g. 10,20,40,80"},
      {"refinements", "extra halvings after a single --n or a --mesh-file"},
      {"eta", "penalty parameter (default per degree and problem)"},
      {"patch-size", "patch threshold #S (default per degree and problem)"},
      {"penalty-scaling", "beta|none: scale penalty weights by beta (default beta)"},
      {"patch-rule", "elements|collocation: what #S counts (default per degree)"},
      {"quad-order", "bulk quadrature exactness (default 2m)"},
      {"geom-tol", "interface sagitta tolerance relative to h_K^2"},
      {"interface", "circle|ellipse|star, overrides the problem's interface"},
      {"params", "comma-separated interface parameters"},
      {"output", "CSV output path"},
      {"mesh-file", "mesh in `v x y` / `t i j k` text format"},
      {"dump-system", "write <path>.<level>.A and <path>.<level>.b"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [name, help] : flags) app.add_option("--" + name, values[name], help);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    patchdg::RunConfig cfg;
    if (!config_path.empty()) cfg = patchdg::read_config_file(config_path);
    for (const auto& [name, help] : flags) {
      if (app.count("--" + name) > 0) patchdg::apply_setting(cfg, name, values[name]);
    }
    patchdg::run_convergence(cfg, quiet ? nullptr : &std::cout);
  } catch (const std::exception& e) {
    print_error(e);
    return patchdg::exit_code_for(e);
  }
  return 0;
}

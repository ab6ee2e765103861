#include "patchdg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "patchdg/dg_system.hpp"
#include "patchdg/errors.hpp"
#include "patchdg/interface_geometry.hpp"
#include "patchdg/mesh.hpp"
#include "patchdg/patch_reconstruction.hpp"
#include "patchdg/solver.hpp"

namespace patchdg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("invalid value '" + text + "' for '" + key + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError("'" + key + "' needs at least one value");
  return out;
}

LevelSet interface_override(const RunConfig& cfg) {
  const auto& p = cfg.interface_params;
  auto need = [&](std::size_t k) {
    if (p.size() != k)
      throw ConfigError("interface '" + cfg.interface + "' takes " + std::to_string(k) + " parameters");
  };
  if (cfg.interface == "circle") {
    need(3);
    return circle_level_set(Vec2(p[0], p[1]), p[2]);
  }
  if (cfg.interface == "ellipse") {
    need(2);
    return ellipse_level_set(p[0], p[1]);
  }
  if (cfg.interface == "star") {
    need(3);
    return star_level_set(p[0], p[1], static_cast<int>(p[2]));
  }
  throw ConfigError("unknown interface '" + cfg.interface + "' (circle, ellipse, star)");
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = trim(raw_key);
  for (char& c : key) c = c == '_' ? '-' : c;
  const std::string v = trim(value);
  if (key == "problem") {
    cfg.problem = v;
  } else if (key == "order") {
    cfg.order = parse_number<int>(key, v);
  } else if (key == "n") {
    cfg.n = parse_list<int>(key, v);
  } else if (key == "refinements") {
    cfg.refinements = parse_number<int>(key, v);
  } else if (key == "eta") {
    cfg.eta = parse_number<double>(key, v);
  } else if (key == "patch-size") {
    cfg.patch_size = parse_number<int>(key, v);
  } else if (key == "patch-rule") {
    if (v == "elements") {
      cfg.patch_rule = PatchRule::ElementCount;
    } else if (v == "collocation") {
      cfg.patch_rule = PatchRule::CollocationCount;
    } else {
      throw ConfigError("patch-rule must be 'elements' or 'collocation', got '" + v + "'");
    }
  } else if (key == "penalty-scaling") {
    if (v != "beta" && v != "none") throw ConfigError("penalty-scaling must be 'beta' or 'none', got '" + v + "'");
    cfg.penalty_scaled_by_beta = v == "beta";
  } else if (key == "quad-order") {
    cfg.quad_order = parse_number<int>(key, v);
  } else if (key == "geom-tol") {
    cfg.geom_tol = parse_number<double>(key, v);
  } else if (key == "interface") {
    cfg.interface = v;
  } else if (key == "params") {
    cfg.interface_params = parse_list<double>(key, v);
  } else if (key == "output") {
    cfg.output = v;
  } else if (key == "mesh-file") {
    cfg.mesh_file = v;
  } else if (key == "dump-system") {
    cfg.dump_system = v;
  } else {
    throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

RunConfig read_config(std::istream& in, RunConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

RunConfig read_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_config(in, std::move(base));
}

void validate(const RunConfig& cfg) {
  if (cfg.order < 2) throw ConfigError("order must be at least 2, got " + std::to_string(cfg.order));
  const auto names = problem_names();
  if (std::find(names.begin(), names.end(), cfg.problem) == names.end())
    throw ConfigError("unknown problem '" + cfg.problem + "'");
  if (cfg.mesh_file.empty()) {
    if (cfg.n.empty()) throw ConfigError("refinement list is empty");
    for (int n : cfg.n) {
      if (n < 2) throw ConfigError("n must be at least 2");
    }
  }
  if (cfg.refinements < 0) throw ConfigError("refinements must be nonnegative");
  if (cfg.eta && !(*cfg.eta > 0.0)) throw ConfigError("eta must be positive");
  if (cfg.patch_size && *cfg.patch_size < 1) throw ConfigError("patch size must be positive");
  if (cfg.quad_order != 0 && cfg.quad_order < 2 * cfg.order) throw ConfigError("quad-order must be at least 2m");
  if (!(cfg.geom_tol > 0.0)) throw ConfigError("geom-tol must be positive");
  if (!cfg.interface.empty()) interface_override(cfg);
}

RunResult run_convergence(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  NamedProblem problem = problem_by_name(cfg.problem);
  LevelSet level_set = cfg.interface.empty() ? problem.level_set : interface_override(cfg);
  const ProblemParameters rec = problem.recommended(cfg.order);
  AssemblyOptions opts;
  opts.penalty.eta = cfg.eta.value_or(rec.eta);
  opts.penalty.scale_by_beta = cfg.penalty_scaled_by_beta;
  opts.quad_order = cfg.quad_order;
  const int threshold = cfg.patch_size.value_or(rec.patch_size);
  const PatchRule rule = cfg.patch_rule.value_or(rec.rule);
  const int error_order = (cfg.quad_order > 0 ? cfg.quad_order : 2 * cfg.order) + 2;

  std::vector<Mesh> meshes;
  if (!cfg.mesh_file.empty()) {
    meshes.push_back(Mesh::read_file(cfg.mesh_file));
    for (int r = 0; r < cfg.refinements; ++r) meshes.push_back(meshes.back().refined());
  } else {
    std::vector<int> ns = cfg.n;
    if (ns.size() == 1) {
      for (int r = 0; r < cfg.refinements; ++r) ns.push_back(ns.back() * 2);
    }
    for (int n : ns) meshes.push_back(Mesh::structured(problem.domain, n));
  }

  RunResult result;
  for (std::size_t level = 0; level < meshes.size(); ++level) {
    const Mesh& mesh = meshes[level];
    std::string stage = "classify";
    auto fail = [&] {
      std::throw_with_nested(Error("stage '" + stage + "' failed on level " + std::to_string(level) + " (" +
                                   std::to_string(mesh.num_elements()) + " elements)"));
    };
    try {
      ClassificationOptions copt;
      copt.geom_tol = cfg.geom_tol;
      const InterfaceClassification cls(mesh, level_set, copt);
      stage = "reconstruct";
      const ReconstructionSpace space(cls, cfg.order, threshold, rule);
      stage = "assemble";
      auto t0 = Clock::now();
      const LinearSystem sys = assemble_system(space, problem.spec, opts);
      const double assemble_ms = ms_since(t0);
      if (!cfg.dump_system.empty()) {
        const std::string base = cfg.dump_system.string() + "." + std::to_string(level);
        std::ofstream fa(base + ".A"), fb(base + ".b");
        if (!fa || !fb) throw ConfigError("cannot write system dump " + base);
        write_coordinate(sys.matrix, fa);
        write_vector(sys.rhs, fb);
      }
      stage = "solve";
      t0 = Clock::now();
      const SolveResult sol = solve_spd(sys.matrix, sys.rhs);
      const double solve_ms = ms_since(t0);
      stage = "errors";
      ErrorReport rep = energy_norms(space, &problem.spec, sol.x, error_order);
      rep.assemble_ms = assemble_ms;
      rep.solve_ms = solve_ms;
      result.table.add(rep);
      LevelDiagnostics d;
      d.elements = mesh.num_elements();
      d.cut_elements = static_cast<int>(cls.cut_elements().size());
      d.symmetry_defect = symmetry_defect(sys.matrix);
      d.galerkin_residual = galerkin_residual(sys.matrix, sys.rhs, sol.x);
      d.min_pivot = sol.report.min_pivot;
      d.vertex_perturbation = cls.perturbation();
      result.levels.push_back(d);
      if (log != nullptr) {
        *log << std::setprecision(6) << "level " << level << ": h=" << rep.h << " dofs=" << rep.dofs
             << " energy=" << rep.energy_error << " l2=" << rep.l2_error << " assemble=" << assemble_ms
             << "ms solve=" << solve_ms << "ms\n";
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error&) {
      fail();
    }
  }

  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw ConfigError("cannot write " + cfg.output.string());
    write_csv(result.table, out);
  }
  return result;
}

void write_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "h,dofs,energy_err,dg_err,l2_err,eoc_energy,eoc_l2,assemble_ms,solve_ms\n";
  const auto& rows = table.rows();
  std::vector<double> re, rl;
  if (rows.size() >= 2) {
    re = table.energy_rates();
    rl = table.l2_rates();
  }
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ErrorReport& r = rows[k];
    line.str({});
    line << r.h << ',' << r.dofs << ',' << r.energy_error << ',' << r.dg_error << ',' << r.l2_error << ',';
    if (k > 0) line << re[k - 1];
    line << ',';
    if (k > 0) line << rl[k - 1];
    line << ',' << r.assemble_ms << ',' << r.solve_ms << '\n';
    out << line.str();
  }
}

int exit_code_for(const std::exception& e) {
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return exit_code_for(inner);
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PatchTooSmall*>(&e) ||
      dynamic_cast<const InvalidArgument*>(&e))
    return 2;
  if (dynamic_cast<const AssumptionViolation*>(&e) || dynamic_cast<const RankDeficient*>(&e) ||
      dynamic_cast<const DegenerateGradient*>(&e))
    return 3;
  if (dynamic_cast<const NotPositiveDefinite*>(&e) || dynamic_cast<const SingularMatrix*>(&e)) return 4;
  return 1;
}

}  // namespace patchdg

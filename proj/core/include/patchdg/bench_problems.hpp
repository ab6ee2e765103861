#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "patchdg/level_set.hpp"
#include "patchdg/patch_reconstruction.hpp"
#include "patchdg/problem.hpp"
#include "patchdg/types.hpp"

namespace patchdg {

struct ProblemParameters {
  double eta = 20.0;
  int patch_size = 12;
  /// Element counting for m <= 3; collocation counting from m = 4 on, where
  /// patches next to the interface otherwise degenerate to interpolation.
  PatchRule rule = PatchRule::ElementCount;
};

struct NamedProblem {
  std::string name;
  Rectangle domain;
  LevelSet level_set;
  ProblemSpec spec;
  /// Penalty and patch size recommended for degree m.
  std::function<ProblemParameters(int m)> recommended;
};

/// Circle r = 0.5, u = exp(x^2+y^2) | 0.1 (x^2+y^2)^2 - 0.005 ln(x^2+y^2),
/// beta = (1, 10).
NamedProblem example1();
/// Circle r = 0.5, u = sin^2(2x) sin^2(2y) | sin(2x) sin(2y), beta = (1, 10).
NamedProblem example2();
/// Ellipse 2x^2 + 3y^2 = 1, u = sin(2x^2+y^2+2) + x | 0.1 cos(1-x^2-y^2),
/// beta = (1, 100).
NamedProblem example3();
/// Star r = 1/2 + sin(5 theta)/7, solution of example3, beta = (1, 10).
NamedProblem example4();
/// u = x^3 + y^3 on both sides of the r = 0.5 circle, beta = (1, 10): f = 0
/// and all jumps except [beta Lap u] and [grad(beta Lap u)] vanish.
NamedProblem cubic_patch_test();

/// Throws InvalidArgument for unknown names.
NamedProblem problem_by_name(const std::string& name);
std::vector<std::string> problem_names();

/// Largest violation of the interface jump relations and boundary data
/// against the exact jets, over `samples` random interface points found on
/// rays from the origin and `samples` random boundary points.
double consistency_defect(const NamedProblem& p, int samples = 100, std::uint64_t seed = 7);

}  // namespace patchdg

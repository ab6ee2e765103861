#pragma once

#include <Eigen/Core>

#include "patchdg/dg_system.hpp"

namespace patchdg {

struct FactorizationReport {
  bool success = false;
  long dimension = 0;
  long nonzeros = 0;
  /// Nonzeros of the factor L (strictly lower part).
  long factor_nonzeros = 0;
  /// Factor nonzeros not present in the lower triangle of A.
  long fill_in = 0;
  double min_pivot = 0.0;
  double relative_residual = 0.0;
  int refinement_steps = 0;
};

struct SolveResult {
  Eigen::VectorXd x;
  FactorizationReport report;
};

/// Sparse LDL^T with a fill-reducing (AMD) ordering, followed by iterative
/// refinement until ||Ax - b|| <= 1e-10 ||b|| or no further progress.
/// Throws NotPositiveDefinite on a non-positive pivot and SingularMatrix if
/// the factorisation breaks down.
SolveResult solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b);

}  // namespace patchdg

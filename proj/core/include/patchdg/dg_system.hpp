#pragma once

#include <iosfwd>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "patchdg/patch_reconstruction.hpp"
#include "patchdg/problem.hpp"

namespace patchdg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Interior-penalty weights mu1 = w eta / h^3 and mu2 = w eta / h with h = h_e
/// on faces and h = h_K on interface pieces. The weight w is beta on e^i and
/// (beta_0 + beta_1) / 2 on Gamma_K when `scale_by_beta` is set, else 1.
struct PenaltyConfig {
  double eta = 20.0;
  bool scale_by_beta = true;

  double weight(double beta) const { return scale_by_beta ? beta : 1.0; }
  double mu1(double h, double beta = 1.0) const { return weight(beta) * eta / (h * h * h); }
  double mu2(double h, double beta = 1.0) const { return weight(beta) * eta / h; }
};

/// Default eta for the reconstruction degree (moderate-contrast problems).
double default_penalty(int degree);

struct AssemblyOptions {
  PenaltyConfig penalty;
  /// Exactness order of bulk rules; face and interface rules use one more.
  /// Defaults to 2m when zero.
  int quad_order = 0;
};

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// A_{ij} = B_h(lambda_j, lambda_i) for the symmetric interior penalty
/// form with Nitsche coupling across the interface.
SparseMatrix assemble_bilinear(const ReconstructionSpace& space, const ProblemSpec& problem,
                               const AssemblyOptions& options);
/// b_i = l_h(lambda_i).
Eigen::VectorXd assemble_linear(const ReconstructionSpace& space, const ProblemSpec& problem,
                                const AssemblyOptions& options);
/// Both in one pass.
LinearSystem assemble_system(const ReconstructionSpace& space, const ProblemSpec& problem,
                             const AssemblyOptions& options);

/// ||A x - b|| / ||b|| (or ||A x|| when b = 0).
double galerkin_residual(const SparseMatrix& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x);

/// max |A - A^T| / max |A|.
double symmetry_defect(const SparseMatrix& a);

/// Writes `i j value` lines for A and `i value` lines for b.
void write_coordinate(const SparseMatrix& a, std::ostream& out);
void write_vector(const Eigen::VectorXd& b, std::ostream& out);

}  // namespace patchdg

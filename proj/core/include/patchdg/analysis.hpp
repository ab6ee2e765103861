#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "patchdg/patch_reconstruction.hpp"
#include "patchdg/problem.hpp"

namespace patchdg {

/// Squared contributions to the two energy norms of v = u - u_h. Face terms
/// are split into interior and boundary faces.
struct NormBreakdown {
  double volume = 0.0;                  // |Lap v|^2
  double face_value_jump = 0.0;         // h_e^-3 |[v]|^2, interior faces
  double face_grad_jump = 0.0;          // h_e^-1 |[grad v]|^2, interior faces
  double boundary_value_jump = 0.0;     // h_e^-3 |v|^2
  double boundary_grad_jump = 0.0;      // h_e^-1 |dv/dn|^2
  double interface_value_jump = 0.0;    // h_K^-3 |[v]|^2
  double interface_grad_jump = 0.0;     // h_K^-1 |[grad v]|^2
  double face_avg_grad_lap = 0.0;       // h_e^3 |{grad Lap v}|^2, all faces
  double face_avg_lap = 0.0;            // h_e |{Lap v}|^2, all faces
  double interface_avg_lap = 0.0;       // h_K |{Lap v}|^2
  double interface_avg_grad_lap = 0.0;  // h_K^3 |{grad Lap v}|^2

  double dg_squared() const;
  double energy_squared() const;
};

struct ErrorReport {
  double h = 0.0;
  long dofs = 0;
  /// |||u - u_h|||_e
  double energy_error = 0.0;
  /// |||u - u_h|||
  double dg_error = 0.0;
  double l2_error = 0.0;
  NormBreakdown breakdown;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

/// Error reports ordered from coarse to fine.
class ConvergenceTable {
 public:
  void add(const ErrorReport& r) { rows_.push_back(r); }
  const std::vector<ErrorReport>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Rates between consecutive rows (size() - 1 entries). Throw NonMonotoneH
  /// unless h strictly decreases.
  std::vector<double> energy_rates() const;
  std::vector<double> dg_rates() const;
  std::vector<double> l2_rates() const;

 private:
  std::vector<ErrorReport> rows_;
};

/// rate_k = log(err_{k-1} / err_k) / log(h_{k-1} / h_k). Throws
/// NonMonotoneH if h is not strictly decreasing and InvalidArgument on
/// mismatched or too short input.
std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& err);

/// Both energy norms and the L2 norm of u - u_h, where u is the exact
/// solution of `problem`, or of u_h alone if `problem` is null. Quadrature
/// order 0 selects 2m + 2.
ErrorReport energy_norms(const ReconstructionSpace& space, const ProblemSpec* problem, const Eigen::VectorXd& u_h,
                         int quad_order = 0);

double l2_error(const ReconstructionSpace& space, const ProblemSpec* problem, const Eigen::VectorXd& u_h,
                int quad_order = 0);

/// max over `samples` random DOF vectors (entries uniform in [-1, 1]) of
/// |||w_h|||_e / |||w_h|||.
double norm_equivalence_probe(const ReconstructionSpace& space, int samples, std::uint64_t seed = 1);

}  // namespace patchdg

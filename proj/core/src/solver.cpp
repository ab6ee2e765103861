#include "patchdg/solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include "patchdg/errors.hpp"

namespace patchdg {

SolveResult solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("solve_spd: dimension mismatch");
  SolveResult out;
  FactorizationReport& rep = out.report;
  rep.dimension = a.rows();
  rep.nonzeros = a.nonZeros();
  if (a.rows() == 0) {
    rep.success = true;
    return out;
  }

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  ldlt.compute(a);
  if (ldlt.info() != Eigen::Success) throw SingularMatrix("sparse LDL^T factorisation failed (zero pivot)");

  const Eigen::VectorXd d = ldlt.vectorD();
  Eigen::Index imin = 0;
  rep.min_pivot = d.minCoeff(&imin);
  if (!(rep.min_pivot > 0.0)) {
    // Report the pivot in the original numbering.
    const long original = ldlt.permutationPinv().indices()(imin);
    throw NotPositiveDefinite(original, rep.min_pivot);
  }
  const SparseMatrix l = ldlt.matrixL();
  rep.factor_nonzeros = l.nonZeros() - l.rows() > 0 ? l.nonZeros() - (l.rows()) : l.nonZeros();
  long lower_a = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) lower_a += it.row() > it.col() ? 1 : 0;
  }
  rep.fill_in = std::max(0L, rep.factor_nonzeros - lower_a);

  out.x = ldlt.solve(b);
  const double nb = b.norm();
  const double target = 1e-10 * (nb > 0 ? nb : 1.0);
  Eigen::VectorXd r = b - a * out.x;
  double rn = r.norm();
  for (int step = 0; step < 5 && rn > target; ++step) {
    const Eigen::VectorXd candidate = out.x + ldlt.solve(r);
    const Eigen::VectorXd rc = b - a * candidate;
    if (!(rc.norm() < rn)) break;
    out.x = candidate;
    r = rc;
    rn = rc.norm();
    rep.refinement_steps = step + 1;
  }
  rep.relative_residual = nb > 0 ? rn / nb : rn;
  rep.success = true;
  return out;
}

}  // namespace patchdg

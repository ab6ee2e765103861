#include <gtest/gtest.h>

#include "patchdg/errors.hpp"
#include "patchdg/solver.hpp"

using namespace patchdg;

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

}  // namespace

TEST(Solver, IdentityReturnsRightHandSide) {
  SparseMatrix id(5, 5);
  id.setIdentity();
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 7;
  const SolveResult r = solve_spd(id, b);
  EXPECT_LE((r.x - b).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(r.report.success);
  EXPECT_DOUBLE_EQ(r.report.min_pivot, 1.0);
}

TEST(Solver, TwoByTwo) {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const SolveResult r = solve_spd(dense_to_sparse(a), Eigen::Vector2d(3, 3));
  EXPECT_NEAR(r.x(0), 1.0, 1e-14);
  EXPECT_NEAR(r.x(1), 1.0, 1e-14);
  EXPECT_LE(r.report.relative_residual, 1e-10);
  EXPECT_GT(r.report.min_pivot, 0.0);
}

TEST(Solver, IndefiniteMatrixReportsThePivot) {
  Eigen::MatrixXd a(3, 3);
  a << 4, 0, 0, 0, -1, 0, 0, 0, 2;
  try {
    solve_spd(dense_to_sparse(a), Eigen::Vector3d(1, 1, 1));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.pivot_index(), 1);
    EXPECT_LT(e.pivot(), 0.0);
  }
}

TEST(Solver, SingularMatrixThrows) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  EXPECT_THROW(solve_spd(dense_to_sparse(a), Eigen::Vector2d(1, 2)), Error);
}

TEST(Solver, DimensionMismatch) {
  SparseMatrix id(3, 3);
  id.setIdentity();
  EXPECT_THROW(solve_spd(id, Eigen::Vector2d(1, 2)), InvalidArgument);
}

TEST(Solver, DeterministicAndAccurateOnLaplacian) {
  const int n = 200;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  const SolveResult r1 = solve_spd(a, b), r2 = solve_spd(a, b);
  EXPECT_EQ(r1.x, r2.x);
  EXPECT_LE((a * r1.x - b).norm() / b.norm(), 1e-10);
  EXPECT_EQ(r1.report.dimension, n);
  EXPECT_EQ(r1.report.nonzeros, 3 * n - 2);
}

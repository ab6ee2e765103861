#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "patchdg/types.hpp"

namespace patchdg {

/// Value and the derivatives the biharmonic forms need.
struct Jet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  double lap = 0.0;
  Vec2 grad_lap = Vec2::Zero();

  Jet operator-(const Jet& o) const { return {value - o.value, grad - o.grad, lap - o.lap, grad_lap - o.grad_lap}; }
};

/// Rows of a jet matrix: value, d/dx, d/dy, Laplacian, d/dx Laplacian,
/// d/dy Laplacian.
enum JetRow : int { kValue = 0, kDx, kDy, kLap, kLapDx, kLapDy, kJetRows };
using JetMatrix = Eigen::Matrix<double, kJetRows, Eigen::Dynamic>;

inline Jet jet_from_column(const Eigen::Matrix<double, kJetRows, 1>& c) {
  return {c(kValue), Vec2(c(kDx), c(kDy)), c(kLap), Vec2(c(kLapDx), c(kLapDy))};
}

/// Scaled monomials ((x - c) / s)^a ((y - c) / s)^b with a + b <= degree,
/// ordered by total degree, then by decreasing a.
class PolynomialBasis {
 public:
  PolynomialBasis(int degree, const Vec2& center, double scale);

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }
  const std::pair<int, int>& exponent(int j) const { return exponents_[j]; }

  Eigen::RowVectorXd values(const Vec2& x) const;
  /// kJetRows x size() matrix of the basis jets at x.
  JetMatrix jets(const Vec2& x) const;
  /// Derivative d^i/dx^i d^j/dy^j of every basis function at x.
  Eigen::RowVectorXd derivative(const Vec2& x, int i, int j) const;

 private:
  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> exponents_;
};

}  // namespace patchdg

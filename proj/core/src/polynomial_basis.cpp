#include "patchdg/polynomial_basis.hpp"

#include <cmath>

#include "patchdg/errors.hpp"

namespace patchdg {

namespace {

// a! / (a - i)!, zero if i > a.
double falling(int a, int i) {
  if (i > a) return 0.0;
  double r = 1.0;
  for (int k = 0; k < i; ++k) r *= a - k;
  return r;
}

}  // namespace

PolynomialBasis::PolynomialBasis(int degree, const Vec2& center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw InvalidArgument("polynomial degree must be non-negative");
  if (!(scale > 0.0)) throw InvalidArgument("basis scale must be positive");
  for (int total = 0; total <= degree; ++total) {
    for (int a = total; a >= 0; --a) exponents_.emplace_back(a, total - a);
  }
}

Eigen::RowVectorXd PolynomialBasis::values(const Vec2& x) const { return derivative(x, 0, 0); }

Eigen::RowVectorXd PolynomialBasis::derivative(const Vec2& x, int i, int j) const {
  const double xi = (x.x() - center_.x()) / scale_;
  const double eta = (x.y() - center_.y()) / scale_;
  std::vector<double> px(degree_ + 1, 1.0), py(degree_ + 1, 1.0);
  for (int k = 1; k <= degree_; ++k) {
    px[k] = px[k - 1] * xi;
    py[k] = py[k - 1] * eta;
  }
  const double factor = std::pow(scale_, -(i + j));
  Eigen::RowVectorXd out(size());
  for (int k = 0; k < size(); ++k) {
    const auto [a, b] = exponents_[k];
    if (a < i || b < j) {
      out(k) = 0.0;
    } else {
      out(k) = falling(a, i) * falling(b, j) * px[a - i] * py[b - j] * factor;
    }
  }
  return out;
}

JetMatrix PolynomialBasis::jets(const Vec2& x) const {
  JetMatrix m(static_cast<int>(kJetRows), size());
  m.row(kValue) = derivative(x, 0, 0);
  m.row(kDx) = derivative(x, 1, 0);
  m.row(kDy) = derivative(x, 0, 1);
  m.row(kLap) = derivative(x, 2, 0) + derivative(x, 0, 2);
  m.row(kLapDx) = derivative(x, 3, 0) + derivative(x, 1, 2);
  m.row(kLapDy) = derivative(x, 2, 1) + derivative(x, 0, 3);
  return m;
}

}  // namespace patchdg

#include "patchdg/level_set.hpp"

#include <cmath>
#include <limits>

#include "patchdg/errors.hpp"

namespace patchdg {

LevelSet circle_level_set(const Vec2& center, double radius) {
  return LevelSet(
      "circle", [center, radius](const Vec2& x) { return (x - center).squaredNorm() - radius * radius; },
      [center](const Vec2& x) -> Vec2 { return 2.0 * (x - center); });
}

LevelSet ellipse_level_set(double a, double b) {
  return LevelSet(
      "ellipse", [a, b](const Vec2& x) { return a * x.x() * x.x() + b * x.y() * x.y() - 1.0; },
      [a, b](const Vec2& x) -> Vec2 { return Vec2(2.0 * a * x.x(), 2.0 * b * x.y()); });
}

LevelSet star_level_set(double r0, double amplitude, int petals) {
  const double k = petals;
  return LevelSet(
      "star",
      [r0, amplitude, k](const Vec2& x) {
        const double theta = std::atan2(x.y(), x.x());
        return x.norm() - (r0 + amplitude * std::sin(k * theta));
      },
      [amplitude, k](const Vec2& x) -> Vec2 {
        const double rho2 = x.squaredNorm();
        const double rho = std::sqrt(rho2);
        if (rho == 0.0) return Vec2::Zero();
        const double theta = std::atan2(x.y(), x.x());
        const double dr_dtheta = amplitude * k * std::cos(k * theta);
        // grad(theta) = (-y, x) / rho^2
        return x / rho - dr_dtheta * Vec2(-x.y(), x.x()) / rho2;
      });
}

LevelSet line_level_set(const Vec2& normal, double offset) {
  return LevelSet(
      "line", [normal, offset](const Vec2& x) { return normal.dot(x) - offset; },
      [normal](const Vec2&) -> Vec2 { return normal; });
}

Vec2 interface_normal(const LevelSet& ls, const Vec2& p) {
  const Vec2 g = ls.gradient(p);
  const double n = g.norm();
  if (!(n >= 1e-8)) throw DegenerateGradient("level-set gradient vanishes near the interface");
  return g / n;
}

Vec2 edge_root(const LevelSet& ls, const Vec2& a, const Vec2& b) {
  double fa = ls(a);
  const double fb = ls(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw InvalidArgument("edge_root: phi has the same sign at both endpoints");

  const Vec2 d = b - a;
  const double scale = std::max(std::abs(fa), std::abs(fb));
  const double ftol = 1e-12 * scale;
  double lo = 0.0, hi = 1.0;
  double t = 0.5;
  int it = 0;
  for (; it < 200; ++it) {
    t = 0.5 * (lo + hi);
    const double ft = ls(a + t * d);
    if (std::abs(ft) <= 1e-3 * scale) break;
    if ((ft < 0) == (fa < 0)) {
      lo = t;
      fa = ft;
    } else {
      hi = t;
    }
    if (hi - lo < 1e-15) break;
  }
  if (it == 200) throw NoConvergence("edge_root: bisection did not converge in 200 steps");

  // Newton on the segment parameter, kept inside the current bracket.
  for (int k = 0; k < 60; ++k) {
    const Vec2 p = a + t * d;
    const double ft = ls(p);
    if (std::abs(ft) <= ftol) return p;
    if ((ft < 0) == (fa < 0)) {
      lo = t;
    } else {
      hi = t;
    }
    const double slope = ls.gradient(p).dot(d);
    double next = slope != 0.0 ? t - ft / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t || hi - lo < 4 * std::numeric_limits<double>::epsilon()) return a + next * d;
    t = next;
  }
  return a + t * d;
}

}  // namespace patchdg

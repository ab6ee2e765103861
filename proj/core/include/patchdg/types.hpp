#pragma once

#include <Eigen/Core>

namespace patchdg {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Outward normal of a directed segment a->b whose interior lies to the left.
inline Vec2 right_normal(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  return Vec2(d.y(), -d.x()).normalized();
}

struct Rectangle {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};

  double area() const { return (hi.x() - lo.x()) * (hi.y() - lo.y()); }
};

}  // namespace patchdg

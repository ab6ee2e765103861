#pragma once

#include <functional>
#include <string>

#include "patchdg/types.hpp"

namespace patchdg {

/// Scalar field whose zero set is the interface. phi < 0 is side 0 and
/// phi > 0 is side 1; the gradient points from side 0 to side 1.
class LevelSet {
 public:
  using ValueFn = std::function<double(const Vec2&)>;
  using GradientFn = std::function<Vec2(const Vec2&)>;

  LevelSet(std::string name, ValueFn value, GradientFn gradient)
      : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)) {}

  double operator()(const Vec2& x) const { return value_(x) + offset_; }
  double value(const Vec2& x) const { return value_(x) + offset_; }
  Vec2 gradient(const Vec2& x) const { return gradient_(x); }
  const std::string& name() const { return name_; }

  /// Copy of this level set shifted by a constant (phi + delta).
  LevelSet shifted(double delta) const {
    LevelSet copy = *this;
    copy.offset_ += delta;
    return copy;
  }
  double offset() const { return offset_; }

 private:
  std::string name_;
  ValueFn value_;
  GradientFn gradient_;
  double offset_ = 0.0;
};

/// |x - center|^2 - r^2.
LevelSet circle_level_set(const Vec2& center, double radius);
/// a x^2 + b y^2 - 1.
LevelSet ellipse_level_set(double a, double b);
/// |x| - (r0 + amplitude * sin(petals * theta)).
LevelSet star_level_set(double r0, double amplitude, int petals);
/// c . x - d, a straight interface.
LevelSet line_level_set(const Vec2& normal, double offset);

/// Unit normal grad(phi)/|grad(phi)| at p, pointing from side 0 to side 1.
/// Throws DegenerateGradient if |grad(phi)| < 1e-8.
Vec2 interface_normal(const LevelSet& ls, const Vec2& p);

/// Root of phi on the segment [a,b]; phi(a) and phi(b) must have opposite
/// signs. Bisection followed by a safeguarded Newton polish.
Vec2 edge_root(const LevelSet& ls, const Vec2& a, const Vec2& b);

}  // namespace patchdg

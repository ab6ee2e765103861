#pragma once

#include <vector>

#include "patchdg/types.hpp"

namespace patchdg {

enum class RegionKind { Bulk, Interface, Face };

struct QuadraturePoint {
  Vec2 x;
  double weight;
  /// Unit normal at the point for interface (side 0 -> side 1) and face
  /// (out of the face's left element) rules; zero for bulk rules.
  Vec2 normal = Vec2::Zero();
};

struct QuadratureRule {
  std::vector<QuadraturePoint> points;
  RegionKind kind = RegionKind::Bulk;
  int side = -1;
  /// Polynomial degree integrated exactly on straight-sided pieces.
  int order = 0;

  double total_weight() const;
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (const auto& q : points) s += q.weight * f(q.x);
    return s;
  }
};

/// n-point Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule1D& gauss_legendre(int n);

/// Number of Gauss points that integrate degree `order` exactly.
inline int gauss_points_for(int order) { return order < 1 ? 1 : (order + 2) / 2; }

/// Collapsed-coordinate (Duffy) Gauss rule on the triangle (a, b, c), exact
/// for polynomials of total degree <= order. Weights are positive.
void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order,
                          std::vector<QuadraturePoint>& out);
QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order);

/// Gauss rule on the segment [a, b]; the normal field is left unset.
void append_segment_rule(const Vec2& a, const Vec2& b, int order, std::vector<QuadraturePoint>& out);

}  // namespace patchdg

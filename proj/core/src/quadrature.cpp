#include "patchdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "patchdg/errors.hpp"

namespace patchdg {

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (const auto& q : points) s += q.weight;
  return s;
}

namespace {

GaussRule1D compute_gauss_legendre(int n) {
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    // Map [-1,1] -> [0,1].
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule1D& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw InvalidArgument("gauss_legendre: unsupported point count");
  static std::mutex mutex;
  static std::map<int, GaussRule1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order,
                          std::vector<QuadraturePoint>& out) {
  // (s, t) in [0,1]^2 -> a + s (b - a) + s t (c - b); Jacobian 2|K| s.
  const int n = gauss_points_for(order + 1);
  const auto& g = gauss_legendre(n);
  const double jac = std::abs(cross(b - a, c - a));
  for (int i = 0; i < n; ++i) {
    const double s = g.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double t = g.nodes[j];
      out.push_back({a + s * (b - a) + s * t * (c - b), g.weights[i] * g.weights[j] * s * jac});
    }
  }
}

QuadratureRule triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int order) {
  QuadratureRule rule;
  rule.kind = RegionKind::Bulk;
  rule.order = order;
  append_triangle_rule(a, b, c, order, rule.points);
  return rule;
}

void append_segment_rule(const Vec2& a, const Vec2& b, int order, std::vector<QuadraturePoint>& out) {
  const auto& g = gauss_legendre(gauss_points_for(order));
  const double len = (b - a).norm();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) out.push_back({a + g.nodes[i] * (b - a), g.weights[i] * len});
}

}  // namespace patchdg

#pragma once

#include <array>
#include <functional>

#include "patchdg/polynomial_basis.hpp"
#include "patchdg/types.hpp"

namespace patchdg {

/// Data of Delta(beta Delta u) = f with piecewise-constant beta, boundary
/// data u = g1, du/dn = g2, and interface jumps
///   [u] = a1 n0, [grad u] = a2, [beta Delta u] = a3 n0, [grad(beta Delta u)] = a4,
/// where [.] is value_0 - value_1 projected on n0 (pointing 0 -> 1).
struct ProblemSpec {
  using ExactFn = std::function<Jet(const Vec2&)>;
  using ScalarFn = std::function<double(const Vec2&)>;
  /// Interface data at a point with normal n0.
  using InterfaceFn = std::function<double(const Vec2&, const Vec2&)>;

  std::array<double, 2> beta{1.0, 1.0};
  /// Exact solution jets per side (value, grad, Laplacian, grad Laplacian).
  std::array<ExactFn, 2> exact;
  std::array<ScalarFn, 2> source;
  InterfaceFn a1, a2, a3, a4;
  /// Boundary data; `side` selects the branch of the solution at x.
  std::function<double(const Vec2&, int side)> g1;
  /// Normal derivative for the outward normal n.
  std::function<double(const Vec2&, const Vec2& n, int side)> g2;

  bool has_exact() const { return static_cast<bool>(exact[0]) && static_cast<bool>(exact[1]); }

  /// Derives all boundary and interface data from per-side exact solutions
  /// and their bi-Laplacians.
  static ProblemSpec from_exact(std::array<double, 2> beta, std::array<ExactFn, 2> exact,
                                std::array<ScalarFn, 2> bilaplacian);
};

/// Interface jump data implied by exact jets u0 | u1 and normal n0.
struct JumpData {
  double a1, a2, a3, a4;
};
JumpData jumps_from_exact(const std::array<double, 2>& beta, const Jet& u0, const Jet& u1, const Vec2& n0);

}  // namespace patchdg

#include "patchdg/problem.hpp"

#include "patchdg/errors.hpp"

namespace patchdg {

JumpData jumps_from_exact(const std::array<double, 2>& beta, const Jet& u0, const Jet& u1, const Vec2& n0) {
  return {u0.value - u1.value, n0.dot(u0.grad - u1.grad), beta[0] * u0.lap - beta[1] * u1.lap,
          n0.dot(beta[0] * u0.grad_lap - beta[1] * u1.grad_lap)};
}

ProblemSpec ProblemSpec::from_exact(std::array<double, 2> beta, std::array<ExactFn, 2> exact,
                                    std::array<ScalarFn, 2> bilaplacian) {
  if (!(beta[0] > 0.0 && beta[1] > 0.0)) throw InvalidArgument("beta must be positive on both sides");
  ProblemSpec p;
  p.beta = beta;
  p.exact = exact;
  for (int s = 0; s < 2; ++s) {
    p.source[s] = [b = beta[s], f = bilaplacian[s]](const Vec2& x) { return b * f(x); };
  }
  auto jump = [beta, exact](auto pick) {
    return [beta, exact, pick](const Vec2& x, const Vec2& n0) {
      return pick(jumps_from_exact(beta, exact[0](x), exact[1](x), n0));
    };
  };
  p.a1 = jump([](const JumpData& j) { return j.a1; });
  p.a2 = jump([](const JumpData& j) { return j.a2; });
  p.a3 = jump([](const JumpData& j) { return j.a3; });
  p.a4 = jump([](const JumpData& j) { return j.a4; });
  p.g1 = [exact](const Vec2& x, int side) { return exact[side](x).value; };
  p.g2 = [exact](const Vec2& x, const Vec2& n, int side) { return n.dot(exact[side](x).grad); };
  return p;
}

}  // namespace patchdg

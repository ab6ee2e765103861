#include "patchdg/bench_problems.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "patchdg/errors.hpp"

namespace patchdg {

namespace {

const Rectangle kSquare{Vec2(-1.0, -1.0), Vec2(1.0, 1.0)};

PatchRule rule_for(int m) { return m >= 4 ? PatchRule::CollocationCount : PatchRule::ElementCount; }

ProblemParameters table_one(int m) {
  switch (m) {
    case 2: return {20.0, 12, rule_for(m)};
    case 3: return {20.0, 18, rule_for(m)};
    case 4: return {20.0, 25, rule_for(m)};
    case 5: return {35.0, 32, rule_for(m)};
    case 6: return {35.0, 55, rule_for(m)};
    default: return {m > 6 ? 35.0 : 20.0, default_patch_size(m), rule_for(m)};
  }
}

ProblemParameters table_two(int m) {
  switch (m) {
    case 2: return {50.0, 12, rule_for(m)};
    case 3: return {100.0, 18, rule_for(m)};
    case 4: return {300.0, 25, rule_for(m)};
    default: return {300.0, table_one(m).patch_size, rule_for(m)};
  }
}

NamedProblem make(std::string name, LevelSet ls, std::array<double, 2> beta, std::array<ProblemSpec::ExactFn, 2> exact,
                  std::array<ProblemSpec::ScalarFn, 2> bilap, std::function<ProblemParameters(int)> rec) {
  NamedProblem p{std::move(name), kSquare, std::move(ls), ProblemSpec::from_exact(beta, exact, bilap), std::move(rec)};
  const double defect = consistency_defect(p);
  if (!(defect <= 1e-9)) throw Error(p.name + ": interface/boundary data inconsistent (" + std::to_string(defect) + ")");
  return p;
}

Jet ex1_inner(const Vec2& x) {
  const double s = x.squaredNorm();
  const double e = std::exp(s);
  return {e, 2.0 * e * x, 4.0 * e * (1.0 + s), 8.0 * e * (2.0 + s) * x};
}

Jet ex1_outer(const Vec2& x) {
  const double s = x.squaredNorm();
  if (!(s > 0.01)) throw InvalidArgument("example1: outer branch evaluated too close to the origin");
  return {0.1 * s * s - 0.005 * std::log(s), (0.4 * s - 0.01 / s) * x, 1.6 * s, 3.2 * x};
}

// Derivatives of sin^2(2t).
struct Sin2Sq {
  double v, d1, d2, d3, d4;
  explicit Sin2Sq(double t) {
    const double s = std::sin(2.0 * t);
    v = s * s;
    d1 = 2.0 * std::sin(4.0 * t);
    d2 = 8.0 * std::cos(4.0 * t);
    d3 = -32.0 * std::sin(4.0 * t);
    d4 = -128.0 * std::cos(4.0 * t);
  }
};

Jet ex2_inner(const Vec2& x) {
  const Sin2Sq a(x.x()), b(x.y());
  return {a.v * b.v, Vec2(a.d1 * b.v, a.v * b.d1), a.d2 * b.v + a.v * b.d2,
          Vec2(a.d3 * b.v + a.d1 * b.d2, a.d2 * b.d1 + a.v * b.d3)};
}

double ex2_inner_bilap(const Vec2& x) {
  const Sin2Sq a(x.x()), b(x.y());
  return a.d4 * b.v + 2.0 * a.d2 * b.d2 + a.v * b.d4;
}

Jet ex2_outer(const Vec2& x) {
  const double sx = std::sin(2.0 * x.x()), cx = std::cos(2.0 * x.x());
  const double sy = std::sin(2.0 * x.y()), cy = std::cos(2.0 * x.y());
  const double u = sx * sy;
  const Vec2 g(2.0 * cx * sy, 2.0 * sx * cy);
  return {u, g, -8.0 * u, -8.0 * g};
}

Jet ex3_inner(const Vec2& p) {
  const double x = p.x(), y = p.y();
  const double q = 2.0 * x * x + y * y + 2.0;
  const double a = 16.0 * x * x + 4.0 * y * y;
  const double s = std::sin(q), c = std::cos(q);
  return {s + x, Vec2(4.0 * x * c + 1.0, 2.0 * y * c), -a * s + 6.0 * c,
          Vec2(-56.0 * x * s - 4.0 * x * a * c, -20.0 * y * s - 2.0 * y * a * c)};
}

double ex3_inner_bilap(const Vec2& p) {
  const double x = p.x(), y = p.y();
  const double q = 2.0 * x * x + y * y + 2.0;
  const double a = 16.0 * x * x + 4.0 * y * y;
  return (a * a - 76.0) * std::sin(q) - (448.0 * x * x + 80.0 * y * y) * std::cos(q);
}

Jet ex3_outer(const Vec2& x) {
  const double s = x.squaredNorm();
  const double sn = std::sin(1.0 - s), cs = std::cos(1.0 - s);
  const double dw = -0.8 * cs - 0.4 * s * sn;
  return {0.1 * cs, 0.2 * sn * x, -0.4 * s * cs + 0.4 * sn, 2.0 * dw * x};
}

double ex3_outer_bilap(const Vec2& x) {
  const double s = x.squaredNorm();
  const double sn = std::sin(1.0 - s), cs = std::cos(1.0 - s);
  return 1.6 * s * s * cs - 6.4 * s * sn - 3.2 * cs;
}

Jet cubic(const Vec2& p) {
  const double x = p.x(), y = p.y();
  return {x * x * x + y * y * y, Vec2(3.0 * x * x, 3.0 * y * y), 6.0 * (x + y), Vec2(6.0, 6.0)};
}

}  // namespace

NamedProblem example1() {
  return make("example1", circle_level_set(Vec2::Zero(), 0.5), {1.0, 10.0}, {ex1_inner, ex1_outer},
              {[](const Vec2& x) {
                 const double s = x.squaredNorm();
                 return 16.0 * std::exp(s) * (s * s + 4.0 * s + 2.0);
               },
               [](const Vec2&) { return 6.4; }},
              table_one);
}

NamedProblem example2() {
  return make("example2", circle_level_set(Vec2::Zero(), 0.5), {1.0, 10.0}, {ex2_inner, ex2_outer},
              {ex2_inner_bilap, [](const Vec2& x) { return 64.0 * std::sin(2.0 * x.x()) * std::sin(2.0 * x.y()); }},
              table_one);
}

NamedProblem example3() {
  return make("example3", ellipse_level_set(2.0, 3.0), {1.0, 100.0}, {ex3_inner, ex3_outer},
              {ex3_inner_bilap, ex3_outer_bilap}, table_two);
}

NamedProblem example4() {
  return make("example4", star_level_set(0.5, 1.0 / 7.0, 5), {1.0, 10.0}, {ex3_inner, ex3_outer},
              {ex3_inner_bilap, ex3_outer_bilap}, table_one);
}

NamedProblem cubic_patch_test() {
  return make("cubic", circle_level_set(Vec2::Zero(), 0.5), {1.0, 10.0}, {cubic, cubic},
              {[](const Vec2&) { return 0.0; }, [](const Vec2&) { return 0.0; }}, table_one);
}

std::vector<std::string> problem_names() { return {"example1", "example2", "example3", "example4", "cubic"}; }

NamedProblem problem_by_name(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  if (name == "example4") return example4();
  if (name == "cubic") return cubic_patch_test();
  throw InvalidArgument("unknown problem '" + name + "'");
}

double consistency_defect(const NamedProblem& p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ProblemSpec& s = p.spec;
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const Vec2 dir(std::cos(theta), std::sin(theta));
    const Vec2 x = edge_root(p.level_set, 1e-3 * dir, 0.95 * dir);
    const Vec2 n0 = interface_normal(p.level_set, x);
    const Jet u0 = s.exact[0](x), u1 = s.exact[1](x);
    const Vec2 jv = (u0.value - u1.value) * n0;
    const double jg = n0.dot(u0.grad - u1.grad);
    const Vec2 jl = (s.beta[0] * u0.lap - s.beta[1] * u1.lap) * n0;
    const double jgl = n0.dot(s.beta[0] * u0.grad_lap - s.beta[1] * u1.grad_lap);
    worst = std::max(worst, (jv - s.a1(x, n0) * n0).norm() / std::max(1.0, jv.norm()));
    worst = std::max(worst, rel(s.a2(x, n0), jg));
    worst = std::max(worst, (jl - s.a3(x, n0) * n0).norm() / std::max(1.0, jl.norm()));
    worst = std::max(worst, rel(s.a4(x, n0), jgl));
  }

  const Vec2 lo = p.domain.lo, hi = p.domain.hi;
  for (int i = 0; i < samples; ++i) {
    const double t = unit(rng);
    Vec2 x, n;
    switch (i % 4) {
      case 0: x = Vec2(lo.x() + t * (hi.x() - lo.x()), lo.y()), n = Vec2(0, -1); break;
      case 1: x = Vec2(hi.x(), lo.y() + t * (hi.y() - lo.y())), n = Vec2(1, 0); break;
      case 2: x = Vec2(lo.x() + t * (hi.x() - lo.x()), hi.y()), n = Vec2(0, 1); break;
      default: x = Vec2(lo.x(), lo.y() + t * (hi.y() - lo.y())), n = Vec2(-1, 0); break;
    }
    const int side = p.level_set(x) < 0.0 ? 0 : 1;
    const Jet u = s.exact[side](x);
    worst = std::max(worst, rel(s.g1(x, side), u.value));
    worst = std::max(worst, rel(s.g2(x, n, side), n.dot(u.grad)));
  }
  return worst;
}

}  // namespace patchdg

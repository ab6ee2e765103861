#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "patchdg/bench_problems.hpp"
#include "patchdg/errors.hpp"
#include "support/oracles.hpp"

using namespace patchdg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

class ProblemJets : public ::testing::TestWithParam<std::string> {};

TEST_P(ProblemJets, DerivativesAndSourceMatchFiniteDifferences) {
  const NamedProblem p = problem_by_name(GetParam());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  int checked[2] = {0, 0};
  while (checked[0] < 25 || checked[1] < 25) {
    const Vec2 x(u(rng), u(rng));
    const double phi = p.level_set(x);
    if (std::abs(phi) < 0.05) continue;
    const int side = phi < 0 ? 0 : 1;
    if (checked[side] >= 25) continue;
    ++checked[side];
    const auto& exact = p.spec.exact[side];
    auto value = [&](const Vec2& y) { return exact(y).value; };
    auto lap = [&](const Vec2& y) { return exact(y).lap; };
    const Jet j = exact(x);
    const double h = 1e-3;
    EXPECT_LE(rel(j.grad.x(), oracle::d1(value, x, 0, h)), 1e-8) << p.name << " at " << x.transpose();
    EXPECT_LE(rel(j.grad.y(), oracle::d1(value, x, 1, h)), 1e-8);
    EXPECT_LE(rel(j.lap, oracle::laplacian(value, x, h)), 1e-6);
    EXPECT_LE(rel(j.grad_lap.x(), oracle::d1(lap, x, 0, h)), 1e-7);
    EXPECT_LE(rel(j.grad_lap.y(), oracle::d1(lap, x, 1, h)), 1e-7);
    const double f = p.spec.beta[side] * oracle::laplacian(lap, x, 1e-2);
    EXPECT_LE(rel(p.spec.source[side](x), f), 1e-5);
  }
}

TEST_P(ProblemJets, DataConsistentWithExactSolution) {
  EXPECT_LE(consistency_defect(problem_by_name(GetParam()), 100, 21), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(All, ProblemJets, ::testing::ValuesIn(problem_names()));

TEST(Problems, Coefficients) {
  EXPECT_EQ(example1().spec.beta, (std::array<double, 2>{1.0, 10.0}));
  EXPECT_EQ(example3().spec.beta, (std::array<double, 2>{1.0, 100.0}));
  EXPECT_EQ(example4().spec.beta, (std::array<double, 2>{1.0, 10.0}));
}

TEST(Problems, Parameters) {
  const NamedProblem e1 = example1();
  EXPECT_EQ(e1.recommended(2).eta, 20.0);
  EXPECT_EQ(e1.recommended(2).patch_size, 12);
  EXPECT_EQ(e1.recommended(3).patch_size, 18);
  EXPECT_EQ(e1.recommended(4).patch_size, 25);
  EXPECT_EQ(e1.recommended(5).eta, 35.0);
  EXPECT_EQ(e1.recommended(6).patch_size, 55);
  const NamedProblem e3 = example3();
  EXPECT_EQ(e3.recommended(2).eta, 50.0);
  EXPECT_EQ(e3.recommended(3).eta, 100.0);
  EXPECT_EQ(e3.recommended(4).eta, 300.0);
}

TEST(Problems, CubicPatchHasNoSource) {
  const NamedProblem p = cubic_patch_test();
  for (const Vec2& x : {Vec2(0.1, 0.2), Vec2(-0.7, 0.8)}) {
    EXPECT_EQ(p.spec.source[0](x), 0.0);
    EXPECT_EQ(p.spec.source[1](x), 0.0);
  }
}

TEST(Problems, GeometryLevelSets) {
  EXPECT_LT(example1().level_set(Vec2(0.49, 0.0)), 0.0);
  EXPECT_GT(example1().level_set(Vec2(0.51, 0.0)), 0.0);
  EXPECT_NEAR(example3().level_set(Vec2(1.0 / std::sqrt(2.0), 0.0)), 0.0, 1e-14);
  // Star radius at theta = pi/10 is 1/2 + 1/7.
  const double t = std::numbers::pi / 10.0, r = 0.5 + 1.0 / 7.0;
  EXPECT_NEAR(example4().level_set(Vec2(r * std::cos(t), r * std::sin(t))), 0.0, 1e-14);
}

TEST(Problems, OuterBranchGuardsTheOrigin) {
  EXPECT_THROW(example1().spec.exact[1](Vec2(0.01, 0.0)), InvalidArgument);
}

TEST(Problems, UnknownName) { EXPECT_THROW(problem_by_name("example5"), InvalidArgument); }

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "patchdg/bench_problems.hpp"
#include "patchdg/errors.hpp"
#include "patchdg/patch_reconstruction.hpp"
#include "support/oracles.hpp"

using namespace patchdg;

namespace {

struct CircleSetup {
  NamedProblem problem = example1();
  Mesh mesh;
  InterfaceClassification cls;

  explicit CircleSetup(int n) : mesh(Mesh::structured(problem.domain, n)), cls(mesh, problem.level_set) {}
};

int element_at(const Mesh& mesh, const Vec2& x) {
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (mesh.contains(k, x)) return k;
  }
  return -1;
}

}  // namespace

TEST(Basis, MatchesPlainMonomialsAndDerivatives) {
  const Vec2 c(0.2, -0.1);
  const PolynomialBasis basis(4, c, 0.3);
  ASSERT_EQ(basis.size(), PolynomialBasis::dimension(4));
  const Vec2 x(0.35, 0.05);
  EXPECT_LE((basis.values(x) - oracle::monomials(4, c, 0.3, x)).cwiseAbs().maxCoeff(), 1e-14);
  const JetMatrix j = basis.jets(x);
  for (int i = 0; i < basis.size(); ++i) {
    auto f = [&](const Vec2& y) { return oracle::monomials(4, c, 0.3, y)(i); };
    auto lap = [&](const Vec2& y) { return oracle::laplacian(f, y, 1e-3); };
    EXPECT_NEAR(j(kDx, i), oracle::d1(f, x, 0, 1e-3), 1e-8);
    EXPECT_NEAR(j(kDy, i), oracle::d1(f, x, 1, 1e-3), 1e-8);
    EXPECT_NEAR(j(kLap, i), lap(x), 1e-6);
    EXPECT_NEAR(j(kLapDx, i), oracle::d1(lap, x, 0, 1e-2), 1e-4 * (1.0 + std::abs(j(kLapDx, i))));
    EXPECT_NEAR(j(kLapDy, i), oracle::d1(lap, x, 1, 1e-2), 1e-4 * (1.0 + std::abs(j(kLapDy, i))));
  }
}

TEST(Fit, ConstantSamplesGiveTheConstant) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.2}, {0.3, 0.7}, {0.8, 0.4}};
  const PolynomialBasis basis(2, Vec2(0.4, 0.4), 1.0);
  const std::vector<double> g(pts.size(), 3.5);
  const Eigen::VectorXd c = fit_constrained_ls(basis, pts, g, 4);
  EXPECT_NEAR(c(0), 3.5, 1e-13);
  EXPECT_LE(c.tail(c.size() - 1).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Fit, SevenPointPatchMatchesKkt) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.2}, {0.3, 0.7}, {0.8, 0.4}};
  const Vec2 c(0.4, 0.4);
  const PolynomialBasis basis(2, c, 0.7);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd g(7);
    for (int i = 0; i < 7; ++i) g(i) = u(rng);
    const std::size_t anchor = trial % 7;
    const Eigen::VectorXd prod = fit_constrained_ls(basis, pts, std::span<const double>(g.data(), 7), anchor);
    const Eigen::VectorXd ref = oracle::kkt_constrained_ls(2, c, 0.7, pts, g, anchor);
    EXPECT_LE((prod - ref).cwiseAbs().maxCoeff(), 1e-9);
    // The constraint holds exactly.
    EXPECT_NEAR(basis.values(pts[anchor]).dot(prod), g(static_cast<Eigen::Index>(anchor)), 1e-13);
  }
}

TEST(Fit, RecoversPolynomialsOnTheRealPatch) {
  CircleSetup s(20);
  const int k = element_at(s.mesh, Vec2(-0.83, -0.81));
  const ElementPatch patch = build_patch(s.cls, k, 1, 18, 3);
  std::vector<Vec2> pts;
  for (int e : patch.collocation) pts.push_back(s.mesh.barycenter(e));
  const PolynomialBasis basis(3, s.mesh.barycenter(k), s.mesh.diameter(k));
  Eigen::VectorXd truth(basis.size());
  for (int i = 0; i < basis.size(); ++i) truth(i) = std::cos(1.0 + i);
  std::vector<double> g;
  for (const Vec2& p : pts) g.push_back(basis.values(p).dot(truth));
  const auto anchor = static_cast<std::size_t>(std::find(patch.collocation.begin(), patch.collocation.end(), k) -
                                               patch.collocation.begin());
  EXPECT_LE((fit_constrained_ls(basis, pts, g, anchor) - truth).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Fit, CollinearPointsAreRankDeficient) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(0.1 * i, 0.05 * i);
  const PolynomialBasis basis(2, Vec2(0.3, 0.1), 1.0);
  EXPECT_THROW(constrained_ls_operator(basis, pts, 0), RankDeficient);
}

TEST(Patch, InteriorPatchFarFromInterface) {
  CircleSetup s(20);
  const int k = element_at(s.mesh, Vec2(-0.83, -0.81));
  ASSERT_TRUE(s.cls.is_interior(k, 1));
  const ElementPatch patch = build_patch(s.cls, k, 1, 12, 2);
  EXPECT_EQ(patch.elements.size(), 12u);
  EXPECT_EQ(patch.collocation.size(), 12u);
  EXPECT_EQ(patch.elements.front(), k);
  EXPECT_EQ(patch.anchor, k);
  // Sorted by barycenter distance.
  for (std::size_t i = 1; i < patch.elements.size(); ++i) {
    const double d0 = (s.mesh.barycenter(patch.elements[i - 1]) - s.mesh.barycenter(k)).norm();
    const double d1 = (s.mesh.barycenter(patch.elements[i]) - s.mesh.barycenter(k)).norm();
    EXPECT_LE(d0, d1 + 1e-14);
  }
}

TEST(Patch, CutElementsInheritTheAnchorPatch) {
  CircleSetup s(20);
  for (int k : s.cls.cut_elements()) {
    for (int side = 0; side < 2; ++side) {
      const ElementPatch p = build_patch(s.cls, k, side, 12, 2);
      const ElementPatch a = build_patch(s.cls, s.cls.anchor(k, side), side, 12, 2);
      EXPECT_EQ(p.anchor, a.anchor);
      EXPECT_EQ(std::set<int>(p.collocation.begin(), p.collocation.end()),
                std::set<int>(a.collocation.begin(), a.collocation.end()));
      std::set<int> pe(p.elements.begin(), p.elements.end());
      for (int e : a.elements) EXPECT_TRUE(pe.count(e));
      EXPECT_TRUE(pe.count(k));
    }
  }
}

TEST(Patch, ThresholdBelowDimensionIsRejected) {
  CircleSetup s(10);
  const int k = element_at(s.mesh, Vec2(-0.83, -0.81));
  EXPECT_THROW(build_patch(s.cls, k, 1, 1, 1), PatchTooSmall);
  EXPECT_THROW(ReconstructionSpace(s.cls, 2, 5), PatchTooSmall);
}

TEST(Patch, CollocationRuleCountsInteriorElements) {
  CircleSetup s(20);
  for (int k : s.cls.cut_elements()) {
    const ElementPatch p = build_patch(s.cls, k, 0, 25, 4, PatchRule::CollocationCount);
    EXPECT_GE(p.collocation.size(), 25u);
  }
}

TEST(Space, ReproducesPolynomialsElementwise) {
  CircleSetup s(20);
  for (int m = 2; m <= 4; ++m) {
    const ProblemParameters rec = s.problem.recommended(m);
    const ReconstructionSpace space(s.cls, m, rec.patch_size, rec.rule);
    const PolynomialBasis global(m, Vec2::Zero(), 1.0);
    Eigen::VectorXd c(global.size());
    for (int i = 0; i < global.size(); ++i) c(i) = std::sin(2.0 + 3.0 * i);
    const Eigen::VectorXd u = space.sample([&](const Vec2& x, int) { return global.values(x).dot(c); });
    for (const auto& l : space.locals()) {
      const Vec2 x = s.mesh.corners(l.element)[1];
      const Jet j = space.evaluate(l.element, l.side, x, u);
      const JetMatrix ref = global.jets(x);
      EXPECT_NEAR(j.value, ref.row(kValue).dot(c), 1e-9);
      EXPECT_NEAR(j.lap, ref.row(kLap).dot(c), 1e-7);
    }
  }
}

TEST(Space, KroneckerPropertyAndFiniteSupport) {
  CircleSetup s(20);
  const ReconstructionSpace space(s.cls, 2, 12);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, space.num_dofs() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = pick(rng);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(space.num_dofs());
    e(d) = 1.0;
    const int owner = space.dof_element(d);
    EXPECT_NEAR(space.value(owner, side_of(s.cls.tag(owner)), s.mesh.barycenter(owner), e), 1.0, 1e-12);
    const auto& support = space.support(d);
    std::set<int> in_support(support.begin(), support.end());
    for (int li = 0; li < static_cast<int>(space.locals().size()); ++li) {
      const auto& l = space.locals()[static_cast<std::size_t>(li)];
      const Vec2 xb = s.mesh.barycenter(l.element);
      const double v = space.value(l.element, l.side, xb, e);
      if (!in_support.count(li)) {
        EXPECT_EQ(v, 0.0);
      } else if (!s.cls.is_cut(l.element) && l.element != owner) {
        EXPECT_NEAR(v, 0.0, 1e-12);
      }
    }
  }
}

TEST(Space, LambdaEstimatesAreBounded) {
  CircleSetup s(20);
  const ReconstructionSpace small(s.cls, 2, 12);
  const ReconstructionSpace large(s.cls, 2, 25);
  const auto d12 = estimate_lambda_constants(small, 8);
  const auto d25 = estimate_lambda_constants(large, 8);
  EXPECT_TRUE(std::isfinite(d12.lambda_m));
  EXPECT_TRUE(std::isfinite(d25.lambda_m));
  for (const auto& p : d12.patches) EXPECT_GE(p.lambda, 1.0);
  EXPECT_LE(d25.max_lambda, 2.0 * d12.max_lambda);
}

TEST(Space, SampledLambdaAtCollocationPointsIsOne) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.2}, {0.3, 0.7}};
  const PolynomialBasis basis(2, Vec2(0.5, 0.5), 1.0);
  EXPECT_GE(sampled_lambda(basis, pts, pts), 1.0);
}

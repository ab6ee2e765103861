#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "patchdg/errors.hpp"
#include "patchdg/mesh.hpp"
#include "support/oracles.hpp"

using namespace patchdg;

namespace {

void expect_valid(const Mesh& mesh, double expected_area) {
  std::map<std::pair<int, int>, int> uses;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto c = mesh.corners(k);
    EXPECT_GT(cross(c[1] - c[0], c[2] - c[0]), 0.0) << "element " << k;
    const auto& t = mesh.triangle(k);
    for (int j = 0; j < 3; ++j) {
      const int a = t[j], b = t[(j + 1) % 3];
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
  }
  int boundary = 0;
  for (const auto& [edge, count] : uses) {
    EXPECT_LE(count, 2);
    boundary += count == 1;
  }
  EXPECT_EQ(static_cast<int>(uses.size()), mesh.num_faces());
  int boundary_faces = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    boundary_faces += face.is_boundary();
    // Involution: the face is listed by both of its triangles.
    for (int k : {face.left, face.right}) {
      if (k < 0) continue;
      const auto& ef = mesh.element_faces(k);
      EXPECT_NE(std::find(ef.begin(), ef.end(), f), ef.end());
    }
  }
  EXPECT_EQ(boundary, boundary_faces);
  EXPECT_NEAR(mesh.total_area(), expected_area, 1e-12 * expected_area);
  EXPECT_LE(mesh.quasi_uniformity(), 5.0);
}

}  // namespace

TEST(Mesh, StructuredCountsAndSize) {
  const Mesh mesh = Mesh::structured({Vec2(-1, -1), Vec2(1, 1)}, 20);
  EXPECT_EQ(mesh.num_elements(), 800);
  EXPECT_EQ(mesh.num_vertices(), 441);
  EXPECT_NEAR(mesh.h(), 2.0 * std::sqrt(2.0) / 20.0, 1e-15);
  expect_valid(mesh, 4.0);
}

TEST(Mesh, SmallestStructuredMesh) {
  const Mesh mesh = Mesh::structured({Vec2(0, 0), Vec2(1, 1)}, 2);
  EXPECT_EQ(mesh.num_elements(), 8);
  for (const Face& f : mesh.faces()) {
    if (!f.is_boundary()) {
      EXPECT_GE(f.left, 0);
      EXPECT_GE(f.right, 0);
    }
  }
  expect_valid(mesh, 1.0);
}

TEST(Mesh, AreaConservation) {
  const Mesh mesh = Mesh::structured({Vec2(-1, -1), Vec2(1, 1)}, 10);
  EXPECT_NEAR(mesh.total_area(), 4.0, 1e-12);
}

TEST(Mesh, RejectsTooFewSubdivisions) {
  EXPECT_THROW(Mesh::structured({Vec2(0, 0), Vec2(1, 1)}, 1), InvalidArgument);
}

TEST(Mesh, RejectsDegenerateInput) {
  EXPECT_THROW(Mesh({Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)}, {{0, 1, 2}}), InvalidArgument);
  EXPECT_THROW(Mesh({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 5}}), InvalidArgument);
}

TEST(Mesh, ClockwiseInputIsReoriented) {
  const Mesh mesh({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 2, 1}});
  const auto c = mesh.corners(0);
  EXPECT_GT(cross(c[1] - c[0], c[2] - c[0]), 0.0);
}

TEST(Mesh, RefinementQuadruplesAndHalves) {
  const Mesh coarse = Mesh::structured({Vec2(0, 0), Vec2(1, 1)}, 2);
  const Mesh fine = coarse.refined();
  EXPECT_EQ(fine.num_elements(), 32);
  EXPECT_NEAR(fine.h(), 0.5 * coarse.h(), 1e-15);
  expect_valid(fine, 1.0);

  const Mesh tenth = Mesh::structured({Vec2(0, 0), Vec2(1, 1)}, 5);
  EXPECT_NEAR(tenth.refined().h(), 0.5 * tenth.h(), 1e-15);
}

TEST(Mesh, MooreNeighboursMatchBruteForce) {
  const Mesh mesh = Mesh::structured({Vec2(-1, -1), Vec2(1, 1)}, 10);
  std::size_t corner = 0, interior_max = 0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& moore = mesh.moore_neighbors(k);
    EXPECT_EQ(moore, oracle::brute_force_moore(mesh, k)) << "element " << k;
    EXPECT_TRUE(std::binary_search(moore.begin(), moore.end(), k));
    interior_max = std::max(interior_max, moore.size());
  }
  // An element well inside the grid: square (4,4), lower triangle.
  const Vec2 inside(-1 + 4.3 * 0.2, -1 + 4.1 * 0.2);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (mesh.contains(k, inside)) EXPECT_EQ(mesh.moore_neighbors(k).size(), 13u);
    if (mesh.contains(k, Vec2(-0.99, -0.999))) corner = mesh.moore_neighbors(k).size();
  }
  EXPECT_EQ(interior_max, 13u);
  EXPECT_GT(corner, 0u);
  EXPECT_LT(corner, 13u);
}

TEST(Mesh, Barycenter) {
  const Mesh mesh({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2}});
  EXPECT_NEAR(mesh.barycenter(0).x(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mesh.barycenter(0).y(), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(mesh.contains(0, mesh.barycenter(0)));

  const double s = std::sqrt(3.0) / 2.0;
  const Mesh eq({Vec2(1, 0), Vec2(-0.5, s), Vec2(-0.5, -s)}, {{0, 1, 2}});
  EXPECT_NEAR(eq.barycenter(0).norm(), 0.0, 1e-15);
}

TEST(Mesh, TextRoundTrip) {
  const Mesh mesh = Mesh::structured({Vec2(-1, -1), Vec2(1, 1)}, 4);
  std::stringstream ss;
  mesh.write(ss);
  const Mesh back = Mesh::read(ss);
  ASSERT_EQ(back.num_elements(), mesh.num_elements());
  ASSERT_EQ(back.num_vertices(), mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) EXPECT_EQ(back.vertex(i), mesh.vertex(i));
  for (int k = 0; k < mesh.num_elements(); ++k) EXPECT_EQ(back.triangle(k), mesh.triangle(k));
}

TEST(Mesh, ReadRejectsMalformedLines) {
  std::istringstream bad("v 0 0\nv 1 0\nv 0 1\nt 0 1\n");
  EXPECT_THROW(Mesh::read(bad), InvalidArgument);
  std::istringstream comments("# unit triangle\nv 0 0\nv 1 0\nv 0 1\nt 0 1 2\n");
  EXPECT_EQ(Mesh::read(comments).num_elements(), 1);
}

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "patchdg/types.hpp"

namespace patchdg {

/// An edge of the triangulation. `left` is the triangle that traverses the
/// edge v[0] -> v[1] counterclockwise; `right` is -1 on the boundary.
struct Face {
  std::array<int, 2> v{};
  int left = -1;
  int right = -1;

  bool is_boundary() const { return right < 0; }
};

/// Conforming triangulation of a polygonal domain with face and vertex
/// adjacency. Immutable after construction.
class Mesh {
 public:
  /// Triangles may be given in either orientation; they are stored CCW.
  /// Throws InvalidArgument for out-of-range indices, degenerate triangles or
  /// non-manifold edges.
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  /// n x n squares, each split along the (lo,lo)->(hi,hi) diagonal.
  static Mesh structured(const Rectangle& domain, int n);

  /// Text format: `v x y` and `t i j k` lines (0-based), `#` comments.
  static Mesh read(std::istream& in);
  static Mesh read_file(const std::filesystem::path& path);
  void write(std::ostream& out) const;

  /// Red refinement: every triangle split into four by its edge midpoints.
  Mesh refined() const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(triangles_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Vec2& vertex(int i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(int k) const { return triangles_[k]; }
  std::array<Vec2, 3> corners(int k) const;
  const Face& face(int f) const { return faces_[f]; }
  /// Face ids of triangle k; entry j is the edge opposite local vertex j.
  const std::array<int, 3>& element_faces(int k) const { return element_faces_[k]; }
  const std::vector<Face>& faces() const { return faces_; }

  double area(int k) const { return areas_[k]; }
  double diameter(int k) const { return diameters_[k]; }
  double face_length(int f) const;
  /// Diameter of the inscribed circle.
  double inscribed_diameter(int k) const;
  Vec2 barycenter(int k) const;
  /// Unit normal of face f pointing out of its left triangle.
  Vec2 face_normal(int f) const;

  double h() const { return h_max_; }
  /// Recorded quasi-uniformity constant h / min_K rho_K.
  double quasi_uniformity() const { return nu_; }
  double total_area() const;

  /// All triangles whose closure meets the closure of k, including k,
  /// sorted by id.
  const std::vector<int>& moore_neighbors(int k) const { return moore_[k]; }

  /// True if x lies in the closed triangle k (with a small relative slack).
  bool contains(int k, const Vec2& x) const;

 private:
  void build();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<std::vector<int>> moore_;
  double h_max_ = 0.0;
  double nu_ = 0.0;
};

}  // namespace patchdg

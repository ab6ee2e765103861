#pragma once

#include <array>
#include <vector>

#include "patchdg/level_set.hpp"
#include "patchdg/mesh.hpp"
#include "patchdg/quadrature.hpp"

namespace patchdg {

enum class ElementTag { Interior0, Interior1, Cut };
enum class FaceTag { Side0, Side1, Cut };

inline int side_of(ElementTag t) { return t == ElementTag::Interior0 ? 0 : t == ElementTag::Interior1 ? 1 : -1; }

/// A piece of the interface between two consecutive chord nodes q0 and q1.
/// The curve is the graph gamma(t) = q0 + t (q1 - q0) + d(t) nu over the
/// chord, with nu the chord's left normal and d(0) = d(1) = 0.
struct InterfaceSegment {
  Vec2 q0;
  Vec2 q1;
};

/// Geometry of a cut triangle. The lone vertex is the one whose side differs
/// from the other two; `crossing[0]` lies on the edge (lone, lone+1) and
/// `crossing[1]` on the edge (lone+2, lone). `chords` runs from crossing[0]
/// to crossing[1].
struct CutGeometry {
  int lone_vertex = -1;
  int lone_side = -1;
  std::array<Vec2, 2> crossing;
  std::vector<InterfaceSegment> chords;
  /// M^0(K), M^1(K): interior elements on each side among the Moore
  /// neighbours, nearest barycenter first, ties by id.
  std::array<int, 2> anchor{-1, -1};
};

struct ClassificationOptions {
  /// Absolute sagitta tolerance for the chord subdivision is
  /// geom_tol * h_K^2.
  double geom_tol = 1e-3;
  /// Sign samples per edge used to detect multiple crossings.
  int edge_samples = 32;
};

/// Tags of every element and face against the interface, the cut geometry
/// and the anchor maps M^i. Immutable after construction; the referenced
/// mesh must outlive it.
class InterfaceClassification {
 public:
  /// Throws AssumptionViolation(1) if a face is crossed more than once and
  /// AssumptionViolation(2) if some cut element lacks an interior Moore
  /// neighbour on one side.
  InterfaceClassification(const Mesh& mesh, LevelSet level_set, ClassificationOptions options = {});

  const Mesh& mesh() const { return *mesh_; }
  const LevelSet& level_set() const { return level_set_; }
  const ClassificationOptions& options() const { return options_; }

  /// Constant added to phi because the interface passed through a vertex.
  double perturbation() const { return level_set_.offset() - base_offset_; }

  ElementTag tag(int k) const { return element_tags_[k]; }
  FaceTag face_tag(int f) const { return face_tags_[f]; }
  bool is_cut(int k) const { return element_tags_[k] == ElementTag::Cut; }
  bool is_interior(int k, int side) const { return side_of(element_tags_[k]) == side; }
  /// |K^side| > 0, i.e. K belongs to T_h^side.
  bool touches_side(int k, int side) const { return is_cut(k) || is_interior(k, side); }
  /// Sides of face f with positive length.
  bool face_touches_side(int f, int side) const;
  /// Crossing point of a cut face.
  const Vec2& face_root(int f) const { return face_roots_[f]; }

  const CutGeometry& cut(int k) const;
  const std::vector<int>& cut_elements() const { return cut_elements_; }
  /// M^side(K): K itself if interior on that side, the chosen anchor if cut,
  /// -1 otherwise.
  int anchor(int k, int side) const;

  /// Quadrature over K^side; throws EmptyRegion if |K^side| = 0.
  QuadratureRule quad_bulk(int k, int side, int order) const;
  /// Quadrature over Gamma_K with normals n_0; K must be cut.
  QuadratureRule quad_interface(int k, int order) const;
  /// Quadrature over e^side with normals pointing out of the face's left
  /// element; throws EmptyRegion if |e^side| = 0.
  QuadratureRule quad_face(int f, int side, int order) const;

  /// Point on the interface piece at chord parameter t in [0,1] and the
  /// derivative of the parameterisation.
  struct CurvePoint {
    Vec2 x;
    Vec2 tangent;
  };
  CurvePoint curve_point(const InterfaceSegment& s, double t) const;

 private:
  void classify_faces();
  void classify_elements();
  void build_cut_geometry(int k);
  void choose_anchors();
  double project_along(const Vec2& base, const Vec2& nu, double d0) const;
  void subdivide(const Vec2& q0, const Vec2& q1, double tol, int depth, std::vector<InterfaceSegment>& out) const;
  void append_curved_fan(const Vec2& apex, const std::vector<InterfaceSegment>& chords, bool reversed, int order,
                         std::vector<QuadraturePoint>& out) const;

  const Mesh* mesh_;
  LevelSet level_set_;
  double base_offset_;
  ClassificationOptions options_;
  std::vector<double> vertex_phi_;
  std::vector<ElementTag> element_tags_;
  std::vector<FaceTag> face_tags_;
  std::vector<Vec2> face_roots_;
  std::vector<int> cut_index_;
  std::vector<int> cut_elements_;
  std::vector<CutGeometry> cuts_;
};

}  // namespace patchdg

#include "patchdg/interface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "patchdg/errors.hpp"

namespace patchdg {

namespace {

constexpr double kVertexTouchTol = 1e-12;

int sign_side(double phi) { return phi > 0.0 ? 1 : 0; }

Vec2 left_normal(const Vec2& a, const Vec2& b) {
  const Vec2 d = (b - a).normalized();
  return Vec2(-d.y(), d.x());
}

}  // namespace

InterfaceClassification::InterfaceClassification(const Mesh& mesh, LevelSet level_set, ClassificationOptions options)
    : mesh_(&mesh), level_set_(std::move(level_set)), base_offset_(level_set_.offset()), options_(options) {
  if (options_.edge_samples < 2) throw InvalidArgument("edge_samples must be at least 2");
  if (!(options_.geom_tol > 0.0)) throw InvalidArgument("geom_tol must be positive");

  // Shift phi away from any vertex it vanishes at. The positive shift is
  // tried first; a chord edge with both ends on the interface needs the
  // negative one.
  const double delta = 1e-10 * mesh.h();
  const double shifts[] = {0.0, delta, -delta, 10.0 * delta, -10.0 * delta};
  const LevelSet original = level_set_;
  std::string last_failure = "a vertex stays on the interface";
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == std::size(shifts))
      throw AssumptionViolation(1, "interface passes through mesh vertices and no small shift of phi separates them (" +
                                       last_failure + ")");
    level_set_ = attempt == 0 ? original : original.shifted(shifts[attempt]);
    vertex_phi_.resize(mesh.num_vertices());
    bool touches = false;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      vertex_phi_[v] = level_set_(mesh.vertex(v));
      touches = touches || std::abs(vertex_phi_[v]) < kVertexTouchTol;
    }
    if (touches) continue;
    try {
      classify_faces();
    } catch (const AssumptionViolation& e) {
      if (attempt == 0) throw;
      last_failure = e.what();
      continue;
    }
    break;
  }

  classify_elements();
  cut_index_.assign(mesh.num_elements(), -1);
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (!is_cut(k)) continue;
    cut_index_[k] = static_cast<int>(cuts_.size());
    cut_elements_.push_back(k);
    cuts_.emplace_back();
    build_cut_geometry(k);
  }
  choose_anchors();
}

void InterfaceClassification::classify_faces() {
  const Mesh& mesh = *mesh_;
  const int ns = options_.edge_samples;
  face_tags_.resize(mesh.num_faces());
  face_roots_.assign(mesh.num_faces(), Vec2::Zero());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const Vec2& a = mesh.vertex(face.v[0]);
    const Vec2& b = mesh.vertex(face.v[1]);
    int changes = 0;
    double prev = vertex_phi_[face.v[0]];
    for (int i = 1; i < ns; ++i) {
      const double phi = i == ns - 1 ? vertex_phi_[face.v[1]] : level_set_(a + (double(i) / (ns - 1)) * (b - a));
      if (phi == 0.0) continue;
      if ((phi > 0) != (prev > 0)) ++changes;
      prev = phi;
    }
    if (changes > 1) {
      throw AssumptionViolation(1, "face " + std::to_string(f) + " is crossed " + std::to_string(changes) +
                                       " times by the interface; refine the mesh");
    }
    const int sa = sign_side(vertex_phi_[face.v[0]]);
    const int sb = sign_side(vertex_phi_[face.v[1]]);
    if (sa != sb) {
      face_tags_[f] = FaceTag::Cut;
      face_roots_[f] = edge_root(level_set_, a, b);
    } else {
      face_tags_[f] = sa == 0 ? FaceTag::Side0 : FaceTag::Side1;
    }
  }
}

void InterfaceClassification::classify_elements() {
  const Mesh& mesh = *mesh_;
  element_tags_.resize(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& t = mesh.triangle(k);
    const int s0 = sign_side(vertex_phi_[t[0]]);
    const int s1 = sign_side(vertex_phi_[t[1]]);
    const int s2 = sign_side(vertex_phi_[t[2]]);
    if (s0 == s1 && s1 == s2) {
      if (sign_side(level_set_(mesh.barycenter(k))) != s0) {
        throw AssumptionViolation(1, "element " + std::to_string(k) +
                                         " encloses an interface component without crossing its faces");
      }
      element_tags_[k] = s0 == 0 ? ElementTag::Interior0 : ElementTag::Interior1;
    } else {
      element_tags_[k] = ElementTag::Cut;
    }
  }
}

double InterfaceClassification::project_along(const Vec2& base, const Vec2& nu, double d0) const {
  double d = d0;
  const double scale = std::max(std::abs(level_set_(base)), 1e-300);
  for (int it = 0; it < 60; ++it) {
    const Vec2 p = base + d * nu;
    const double phi = level_set_(p);
    const double slope = level_set_.gradient(p).dot(nu);
    if (std::abs(slope) < 1e-14) break;
    const double step = phi / slope;
    d -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(d)) || std::abs(phi) <= 1e-15 * scale) {
      return d;
    }
  }
  const Vec2 p = base + d * nu;
  if (std::abs(level_set_(p)) <= 1e-12 * std::max(1.0, scale)) return d;
  throw NoConvergence("interface projection did not converge");
}

InterfaceClassification::CurvePoint InterfaceClassification::curve_point(const InterfaceSegment& s, double t) const {
  const Vec2 chord = s.q1 - s.q0;
  const Vec2 nu = left_normal(s.q0, s.q1);
  const Vec2 base = s.q0 + t * chord;
  const double d = project_along(base, nu, 0.0);
  const Vec2 x = base + d * nu;
  const Vec2 g = level_set_.gradient(x);
  const double gn = g.dot(nu);
  if (std::abs(gn) < 1e-14) throw DegenerateGradient("interface is tangent to its chord normal");
  const double dd = -g.dot(chord) / gn;
  return {x, chord + dd * nu};
}

void InterfaceClassification::subdivide(const Vec2& q0, const Vec2& q1, double tol, int depth,
                                        std::vector<InterfaceSegment>& out) const {
  const Vec2 mid = 0.5 * (q0 + q1);
  const Vec2 nu = left_normal(q0, q1);
  const double d = project_along(mid, nu, 0.0);
  const double chord = (q1 - q0).norm();
  if (depth < 30 && (std::abs(d) > tol || std::abs(d) > 0.1 * chord)) {
    const Vec2 m = mid + d * nu;
    subdivide(q0, m, tol, depth + 1, out);
    subdivide(m, q1, tol, depth + 1, out);
  } else {
    out.push_back({q0, q1});
  }
}

void InterfaceClassification::build_cut_geometry(int k) {
  const Mesh& mesh = *mesh_;
  CutGeometry& g = cuts_[cut_index_[k]];
  const auto& t = mesh.triangle(k);
  const int s0 = sign_side(vertex_phi_[t[0]]);
  const int s1 = sign_side(vertex_phi_[t[1]]);
  const int s2 = sign_side(vertex_phi_[t[2]]);
  g.lone_vertex = s1 == s2 ? 0 : (s0 == s2 ? 1 : 2);
  g.lone_side = sign_side(vertex_phi_[t[g.lone_vertex]]);
  const auto& ef = mesh.element_faces(k);
  // element_faces[j] is opposite local vertex j.
  const int face_a = ef[(g.lone_vertex + 2) % 3];  // edge (lone, lone+1)
  const int face_b = ef[(g.lone_vertex + 1) % 3];  // edge (lone+2, lone)
  if (face_tags_[face_a] != FaceTag::Cut || face_tags_[face_b] != FaceTag::Cut) {
    throw AssumptionViolation(1, "cut element " + std::to_string(k) + " has inconsistent face crossings");
  }
  g.crossing = {face_roots_[face_a], face_roots_[face_b]};
  const double hk = mesh.diameter(k);
  const double tol = options_.geom_tol * hk * hk;
  g.chords.clear();
  if ((g.crossing[1] - g.crossing[0]).norm() <= 1e-14 * hk) {
    // Interface clips a corner; the piece is degenerate.
    return;
  }
  subdivide(g.crossing[0], g.crossing[1], tol, 0, g.chords);
}

void InterfaceClassification::choose_anchors() {
  const Mesh& mesh = *mesh_;
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    const int k = cut_elements_[c];
    const Vec2 xk = mesh.barycenter(k);
    for (int side = 0; side < 2; ++side) {
      int best = -1;
      double best_d = 0.0;
      for (int nb : mesh.moore_neighbors(k)) {
        if (!is_interior(nb, side)) continue;
        const double d = (mesh.barycenter(nb) - xk).squaredNorm();
        if (best < 0 || d < best_d) {
          best = nb;
          best_d = d;
        }
      }
      if (best < 0) {
        throw AssumptionViolation(2, "cut element " + std::to_string(k) + " has no interior Moore neighbour on side " +
                                         std::to_string(side) + "; refine the mesh");
      }
      cuts_[c].anchor[side] = best;
    }
  }
}

bool InterfaceClassification::face_touches_side(int f, int side) const {
  const FaceTag t = face_tags_[f];
  return t == FaceTag::Cut || (side == 0 ? t == FaceTag::Side0 : t == FaceTag::Side1);
}

const CutGeometry& InterfaceClassification::cut(int k) const {
  if (cut_index_[k] < 0) throw InvalidArgument("element " + std::to_string(k) + " is not cut");
  return cuts_[cut_index_[k]];
}

int InterfaceClassification::anchor(int k, int side) const {
  if (is_interior(k, side)) return k;
  if (is_cut(k)) return cuts_[cut_index_[k]].anchor[side];
  return -1;
}

void InterfaceClassification::append_curved_fan(const Vec2& apex, const std::vector<InterfaceSegment>& chords,
                                                bool reversed, int order, std::vector<QuadraturePoint>& out) const {
  const auto& gs = gauss_legendre(gauss_points_for(order + 1));
  const auto& gt = gauss_legendre(gauss_points_for(order) + 2);
  for (const auto& seg : chords) {
    for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
      auto cp = curve_point(seg, gt.nodes[j]);
      const Vec2 tangent = reversed ? Vec2(-cp.tangent) : cp.tangent;
      const double jac = cross(cp.x - apex, tangent);
      for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
        const double s = gs.nodes[i];
        out.push_back({apex + s * (cp.x - apex), gs.weights[i] * gt.weights[j] * s * jac});
      }
    }
  }
}

QuadratureRule InterfaceClassification::quad_bulk(int k, int side, int order) const {
  if (!touches_side(k, side)) {
    throw EmptyRegion("element " + std::to_string(k) + " has no part on side " + std::to_string(side));
  }
  QuadratureRule rule;
  rule.kind = RegionKind::Bulk;
  rule.side = side;
  rule.order = order;
  const auto c = mesh_->corners(k);
  if (!is_cut(k)) {
    append_triangle_rule(c[0], c[1], c[2], order, rule.points);
    return rule;
  }
  const CutGeometry& g = cut(k);
  const Vec2& a = c[g.lone_vertex];
  const Vec2& b = c[(g.lone_vertex + 1) % 3];
  const Vec2& cc = c[(g.lone_vertex + 2) % 3];
  if (side == g.lone_side) {
    append_curved_fan(a, g.chords, false, order, rule.points);
  } else {
    append_triangle_rule(b, cc, g.crossing[1], order, rule.points);
    std::vector<InterfaceSegment> reversed(g.chords.rbegin(), g.chords.rend());
    append_curved_fan(b, reversed, true, order, rule.points);
  }
  return rule;
}

QuadratureRule InterfaceClassification::quad_interface(int k, int order) const {
  const CutGeometry& g = cut(k);
  QuadratureRule rule;
  rule.kind = RegionKind::Interface;
  rule.order = order;
  const auto& gt = gauss_legendre(gauss_points_for(order) + 2);
  for (const auto& seg : g.chords) {
    for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
      auto cp = curve_point(seg, gt.nodes[j]);
      rule.points.push_back({cp.x, gt.weights[j] * cp.tangent.norm(), interface_normal(level_set_, cp.x)});
    }
  }
  return rule;
}

QuadratureRule InterfaceClassification::quad_face(int f, int side, int order) const {
  if (!face_touches_side(f, side)) {
    throw EmptyRegion("face " + std::to_string(f) + " has no part on side " + std::to_string(side));
  }
  const Face& face = mesh_->face(f);
  Vec2 a = mesh_->vertex(face.v[0]);
  Vec2 b = mesh_->vertex(face.v[1]);
  if (face_tags_[f] == FaceTag::Cut) {
    if (sign_side(vertex_phi_[face.v[0]]) == side) {
      b = face_roots_[f];
    } else {
      a = face_roots_[f];
    }
  }
  QuadratureRule rule;
  rule.kind = RegionKind::Face;
  rule.side = side;
  rule.order = order;
  append_segment_rule(a, b, order, rule.points);
  const Vec2 n = mesh_->face_normal(f);
  for (auto& q : rule.points) q.normal = n;
  return rule;
}

}  // namespace patchdg

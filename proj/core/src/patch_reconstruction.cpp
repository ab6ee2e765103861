#include "patchdg/patch_reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include <Eigen/QR>

#include "patchdg/errors.hpp"

namespace patchdg {

namespace {

constexpr double kRankThreshold = 1e-10;

int table_patch_size(int degree) {
  switch (degree) {
    case 2: return 12;
    case 3: return 18;
    case 4: return 25;
    case 5: return 32;
    case 6: return 55;
    default: return PolynomialBasis::dimension(degree) * 2 + 1;
  }
}

// Moore-layer growth inside T_h^side from {k}, then nearest-first
// truncation. The rule decides whether `threshold` counts patch elements or
// collocation (interior) elements.
ElementPatch grow_patch(const InterfaceClassification& cls, int k, int side, int threshold, PatchRule rule) {
  const Mesh& mesh = cls.mesh();
  const bool by_collocation = rule == PatchRule::CollocationCount;
  auto counts = [&](int e) { return !by_collocation || cls.is_interior(e, side); };
  std::vector<int> members{k};
  std::unordered_set<int> seen{k};
  std::vector<int> frontier{k};
  int counted = counts(k) ? 1 : 0;
  while (counted < threshold && !frontier.empty()) {
    std::vector<int> next;
    for (int e : frontier) {
      for (int nb : mesh.moore_neighbors(e)) {
        if (!cls.touches_side(nb, side) || !seen.insert(nb).second) continue;
        next.push_back(nb);
        counted += counts(nb) ? 1 : 0;
      }
    }
    members.insert(members.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  const Vec2 xk = mesh.barycenter(k);
  std::vector<std::pair<double, int>> keyed;
  keyed.reserve(members.size());
  for (int e : members) keyed.emplace_back((mesh.barycenter(e) - xk).squaredNorm(), e);
  std::sort(keyed.begin(), keyed.end());

  ElementPatch patch;
  patch.owner = k;
  patch.side = side;
  patch.anchor = k;
  patch.threshold = threshold;
  int taken = 0;
  for (const auto& [d, e] : keyed) {
    if (taken == threshold) break;
    patch.elements.push_back(e);
    if (cls.is_interior(e, side)) patch.collocation.push_back(e);
    taken += counts(e) ? 1 : 0;
  }
  return patch;
}

std::vector<Vec2> collocation_points(const Mesh& mesh, const ElementPatch& patch) {
  std::vector<Vec2> pts;
  pts.reserve(patch.collocation.size());
  for (int e : patch.collocation) pts.push_back(mesh.barycenter(e));
  return pts;
}

std::size_t anchor_position(const ElementPatch& patch) {
  auto it = std::find(patch.collocation.begin(), patch.collocation.end(), patch.anchor);
  if (it == patch.collocation.end()) throw RankDeficient("anchor element is not a collocation point of its patch");
  return static_cast<std::size_t>(it - patch.collocation.begin());
}

bool has_full_rank(const Mesh& mesh, const ElementPatch& patch, int degree) {
  if (static_cast<int>(patch.collocation.size()) < PolynomialBasis::dimension(degree)) return false;
  const PolynomialBasis basis(degree, mesh.barycenter(patch.owner), mesh.diameter(patch.owner));
  const auto pts = collocation_points(mesh, patch);
  try {
    constrained_ls_operator(basis, pts, anchor_position(patch));
  } catch (const RankDeficient&) {
    return false;
  }
  return true;
}

int count_interior(const InterfaceClassification& cls, int side) {
  int n = 0;
  for (int k = 0; k < cls.mesh().num_elements(); ++k) n += cls.is_interior(k, side) ? 1 : 0;
  return n;
}

ElementPatch build_interior_patch(const InterfaceClassification& cls, int k, int side, int threshold, int degree,
                                  PatchRule rule) {
  const int dim = PolynomialBasis::dimension(degree);
  int t = threshold;
  for (int attempt = 0; attempt <= 3; ++attempt, t += 5) {
    ElementPatch patch = grow_patch(cls, k, side, t, rule);
    if (has_full_rank(cls.mesh(), patch, degree)) return patch;
  }
  if (count_interior(cls, side) < dim) {
    throw PatchTooSmall("side " + std::to_string(side) + " has fewer than " + std::to_string(dim) +
                        " interior elements for degree " + std::to_string(degree));
  }
  throw RankDeficient("patch of element " + std::to_string(k) + " on side " + std::to_string(side) +
                      " is unisolvent-deficient for degree " + std::to_string(degree) + " with #S up to " +
                      std::to_string(threshold + 15));
}

ElementPatch inherit_patch(const ElementPatch& anchor_patch, int k) {
  ElementPatch patch = anchor_patch;
  patch.owner = k;
  patch.anchor = anchor_patch.owner;
  if (std::find(patch.elements.begin(), patch.elements.end(), k) == patch.elements.end()) {
    patch.elements.push_back(k);
  }
  return patch;
}

}  // namespace

int default_patch_size(int degree) { return table_patch_size(degree); }

ElementPatch build_patch(const InterfaceClassification& cls, int k, int side, int threshold, int degree,
                         PatchRule rule) {
  if (threshold < 1) throw InvalidArgument("patch threshold must be positive");
  if (!cls.touches_side(k, side)) {
    throw InvalidArgument("element " + std::to_string(k) + " has no part on side " + std::to_string(side));
  }
  if (threshold < PolynomialBasis::dimension(degree)) {
    throw PatchTooSmall("#S = " + std::to_string(threshold) + " is below dim P_" + std::to_string(degree) + " = " +
                        std::to_string(PolynomialBasis::dimension(degree)));
  }
  if (cls.is_interior(k, side)) return build_interior_patch(cls, k, side, threshold, degree, rule);
  const int anchor = cls.anchor(k, side);
  return inherit_patch(build_interior_patch(cls, anchor, side, threshold, degree, rule), k);
}

Eigen::MatrixXd constrained_ls_operator(const PolynomialBasis& basis, std::span<const Vec2> points,
                                        std::size_t anchor_index) {
  const int n = static_cast<int>(points.size());
  const int p = basis.size();
  if (anchor_index >= points.size()) throw InvalidArgument("anchor index out of range");
  if (n < p) {
    throw RankDeficient(std::to_string(n) + " collocation points cannot determine " + std::to_string(p) +
                        " coefficients");
  }
  const Eigen::RowVectorXd va = basis.values(points[anchor_index]);
  Eigen::MatrixXd reduced(n - 1, p - 1);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(n - 1, n);  // g -> g(x_i) - g(x_anchor)
  for (int i = 0, r = 0; i < n; ++i) {
    if (static_cast<std::size_t>(i) == anchor_index) continue;
    reduced.row(r) = (basis.values(points[i]) - va).tail(p - 1);
    shift(r, i) = 1.0;
    shift(r, static_cast<int>(anchor_index)) = -1.0;
    ++r;
  }

  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(p, n);
  if (p > 1) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reduced);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < p - 1) {
      throw RankDeficient("collocation points lie on an algebraic curve of degree " + std::to_string(basis.degree()) +
                          " (rank " + std::to_string(qr.rank()) + " < " + std::to_string(p - 1) + ")");
    }
    op.bottomRows(p - 1) = qr.solve(shift);
  }
  // c_0 = g(x_anchor) - sum_{j>0} c_j phi_j(x_anchor)
  op.row(0) = -va.tail(p - 1) * op.bottomRows(p - 1);
  op(0, static_cast<int>(anchor_index)) += 1.0;
  return op;
}

Eigen::VectorXd fit_constrained_ls(const PolynomialBasis& basis, std::span<const Vec2> points,
                                   std::span<const double> values, std::size_t anchor_index) {
  if (values.size() != points.size()) throw InvalidArgument("fit_constrained_ls: size mismatch");
  const Eigen::Map<const Eigen::VectorXd> g(values.data(), static_cast<Eigen::Index>(values.size()));
  return constrained_ls_operator(basis, points, anchor_index) * g;
}

ReconstructionSpace::ReconstructionSpace(const InterfaceClassification& cls, int degree, int threshold,
                                         PatchRule rule)
    : cls_(&cls), degree_(degree), threshold_(threshold), rule_(rule) {
  if (degree < 1) throw InvalidArgument("reconstruction degree must be at least 1");
  if (threshold < PolynomialBasis::dimension(degree)) {
    throw PatchTooSmall("#S = " + std::to_string(threshold) + " is below dim P_" + std::to_string(degree));
  }
  const Mesh& mesh = cls.mesh();
  const int ne = mesh.num_elements();
  element_dof_.assign(ne, -1);
  for (int k = 0; k < ne; ++k) {
    if (cls.is_cut(k)) continue;
    element_dof_[k] = static_cast<int>(dof_element_.size());
    dof_element_.push_back(k);
  }
  for (int side = 0; side < 2; ++side) {
    const int interior = count_interior(cls, side);
    if (interior == 0 && cls.cut_elements().empty()) continue;
    if (interior < PolynomialBasis::dimension(degree)) {
      throw PatchTooSmall("side " + std::to_string(side) + " has too few interior elements for degree " +
                          std::to_string(degree));
    }
  }

  local_index_.assign(ne, {-1, -1});
  auto add_local = [&](int k, int side, ElementPatch patch) {
    LocalReconstruction local{k, side, PolynomialBasis(degree, mesh.barycenter(k), mesh.diameter(k)), {}, {}, {}};
    const auto pts = collocation_points(mesh, patch);
    local.matrix = constrained_ls_operator(local.basis, pts, anchor_position(patch));
    local.dofs.reserve(patch.collocation.size());
    for (int e : patch.collocation) local.dofs.push_back(element_dof_[e]);
    local.patch = std::move(patch);
    local_index_[k][side] = static_cast<int>(locals_.size());
    locals_.push_back(std::move(local));
  };

  for (int k = 0; k < ne; ++k) {
    if (cls.is_cut(k)) continue;
    const int side = side_of(cls.tag(k));
    add_local(k, side, build_interior_patch(cls, k, side, threshold, degree, rule));
  }
  for (int k : cls.cut_elements()) {
    for (int side = 0; side < 2; ++side) {
      const int anchor = cls.anchor(k, side);
      add_local(k, side, inherit_patch(locals_[local_index_[anchor][side]].patch, k));
    }
  }

  support_.assign(dof_element_.size(), {});
  for (std::size_t l = 0; l < locals_.size(); ++l) {
    for (int d : locals_[l].dofs) support_[d].push_back(static_cast<int>(l));
  }
}

const LocalReconstruction* ReconstructionSpace::local(int k, int side) const {
  const int idx = local_index_[k][side];
  return idx < 0 ? nullptr : &locals_[idx];
}

JetMatrix ReconstructionSpace::basis_jets(int k, int side, const Vec2& x) const {
  const LocalReconstruction* l = local(k, side);
  if (l == nullptr) throw InvalidArgument("element " + std::to_string(k) + " has no reconstruction on this side");
  return l->basis.jets(x) * l->matrix;
}

Jet ReconstructionSpace::evaluate(int k, int side, const Vec2& x, const Eigen::VectorXd& u) const {
  const LocalReconstruction* l = local(k, side);
  if (l == nullptr) throw InvalidArgument("element " + std::to_string(k) + " has no reconstruction on this side");
  Eigen::VectorXd local_u(l->dofs.size());
  for (std::size_t i = 0; i < l->dofs.size(); ++i) local_u(static_cast<Eigen::Index>(i)) = u(l->dofs[i]);
  const Eigen::VectorXd coeffs = l->matrix * local_u;
  return jet_from_column(l->basis.jets(x) * coeffs);
}

double ReconstructionSpace::value(int k, int side, const Vec2& x, const Eigen::VectorXd& u) const {
  const LocalReconstruction* l = local(k, side);
  if (l == nullptr) throw InvalidArgument("element " + std::to_string(k) + " has no reconstruction on this side");
  Eigen::VectorXd local_u(l->dofs.size());
  for (std::size_t i = 0; i < l->dofs.size(); ++i) local_u(static_cast<Eigen::Index>(i)) = u(l->dofs[i]);
  return l->basis.values(x).dot(l->matrix * local_u);
}

double sampled_lambda(const PolynomialBasis& basis, std::span<const Vec2> collocation, std::span<const Vec2> samples) {
  const int n = static_cast<int>(collocation.size());
  Eigen::MatrixXd v(n, basis.size());
  for (int i = 0; i < n; ++i) v.row(i) = basis.values(collocation[i]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < basis.size()) return std::numeric_limits<double>::infinity();
  // pinv^T rows: w(x) = v(x) V^+, |p(x)| <= ||w(x)||_1 max_I |p|.
  const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(n, n));
  double lambda = 1.0;
  auto probe = [&](const Vec2& x) { lambda = std::max(lambda, (basis.values(x) * pinv).lpNorm<1>()); };
  for (const auto& x : collocation) probe(x);
  for (const auto& x : samples) probe(x);
  return lambda;
}

ReconstructionDiagnostics estimate_lambda_constants(const ReconstructionSpace& space, int grid_size) {
  const InterfaceClassification& cls = space.classification();
  const Mesh& mesh = cls.mesh();
  ReconstructionDiagnostics out;
  for (const auto& local : space.locals()) {
    const ElementPatch& patch = local.patch;
    PatchDiagnostics diag;
    diag.element = local.element;
    diag.side = local.side;
    diag.num_collocation = static_cast<int>(patch.collocation.size());

    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    const Vec2 center = mesh.barycenter(local.element);
    std::unordered_set<int> members(patch.elements.begin(), patch.elements.end());
    for (int e : patch.elements) {
      for (const auto& c : mesh.corners(e)) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
        diag.outer_radius = std::max(diag.outer_radius, (c - center).norm());
      }
      if (cls.is_cut(e)) diag.cut_factor = 3;
    }
    diag.inner_radius = std::numeric_limits<double>::infinity();
    for (int e : patch.elements) {
      for (int f : mesh.element_faces(e)) {
        const Face& face = mesh.face(f);
        const int other = face.left == e ? face.right : face.left;
        if (other >= 0 && members.count(other)) continue;
        const Vec2& a = mesh.vertex(face.v[0]);
        const Vec2& b = mesh.vertex(face.v[1]);
        const double t = std::clamp((center - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
        diag.inner_radius = std::min(diag.inner_radius, (a + t * (b - a) - center).norm());
      }
    }

    std::vector<Vec2> samples;
    for (int i = 0; i < grid_size; ++i) {
      for (int j = 0; j < grid_size; ++j) {
        const double s = grid_size == 1 ? 0.5 : double(i) / (grid_size - 1);
        const double t = grid_size == 1 ? 0.5 : double(j) / (grid_size - 1);
        const Vec2 x(lo.x() + s * (hi.x() - lo.x()), lo.y() + t * (hi.y() - lo.y()));
        for (int e : patch.elements) {
          if (mesh.contains(e, x)) {
            samples.push_back(x);
            break;
          }
        }
      }
    }
    const auto pts = collocation_points(mesh, patch);
    diag.lambda = sampled_lambda(local.basis, pts, samples);
    out.max_lambda = std::max(out.max_lambda, diag.lambda);
    out.lambda_m = std::max(out.lambda_m, 1.0 + diag.lambda * std::sqrt(double(diag.num_collocation)));
    out.patches.push_back(diag);
  }
  return out;
}

}  // namespace patchdg

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "patchdg/interface_geometry.hpp"
#include "patchdg/polynomial_basis.hpp"

namespace patchdg {

/// Default patch size threshold #S for a reconstruction degree.
int default_patch_size(int degree);

/// What the patch threshold #S counts. ElementCount keeps the #S nearest
/// elements of T_h^i, cut ones included. CollocationCount keeps the nearest
/// elements up to and including the #S-th interior one, so every patch has
/// #S collocation points; away from the interface both rules agree.
enum class PatchRule { ElementCount, CollocationCount };

/// Element patch S^i(K) with its collocation elements I^i(K) and anchor
/// M^i(K).
struct ElementPatch {
  int owner = -1;
  int side = -1;
  /// Elements of T_h^side, nearest barycenter to the owner's first.
  std::vector<int> elements;
  /// Interior (uncut) elements of `elements` on `side`; their barycenters
  /// are the collocation points.
  std::vector<int> collocation;
  int anchor = -1;
  /// Threshold actually used after rank-deficiency retries.
  int threshold = 0;
};

/// Builds S^side(k) for #S = threshold. Interior elements grow the patch
/// by Moore layers inside T_h^side; cut elements inherit the patch of
/// M^side(k) (and are appended to it if the nearest-#S truncation dropped
/// them). On rank deficiency the threshold is raised by 5 up to three times.
/// Throws PatchTooSmall or RankDeficient.
ElementPatch build_patch(const InterfaceClassification& cls, int k, int side, int threshold, int degree,
                         PatchRule rule = PatchRule::ElementCount);

/// Linear map (dim P x #points) from sampled values to the coefficients of
/// the least-squares polynomial that interpolates exactly at
/// points[anchor_index]. The constraint is eliminated by writing
/// q = g(x_anchor) + sum_j c_j (phi_j - phi_j(x_anchor)). Throws
/// RankDeficient if the reduced design matrix has rank < dim P - 1.
Eigen::MatrixXd constrained_ls_operator(const PolynomialBasis& basis, std::span<const Vec2> points,
                                        std::size_t anchor_index);

Eigen::VectorXd fit_constrained_ls(const PolynomialBasis& basis, std::span<const Vec2> points,
                                   std::span<const double> values, std::size_t anchor_index);

/// Per (element, side) reconstruction: coefficients = matrix * dof values.
struct LocalReconstruction {
  int element = -1;
  int side = -1;
  PolynomialBasis basis;
  /// Global DOF ids of the collocation elements, in patch order.
  std::vector<int> dofs;
  /// basis.size() x dofs.size().
  Eigen::MatrixXd matrix;
  ElementPatch patch;
};

/// The reconstructed space U_h^m: one DOF per uncut element and a degree-m
/// polynomial per (element, side) obtained from the constrained fit over its
/// patch. Immutable after construction; the classification must outlive it.
class ReconstructionSpace {
 public:
  ReconstructionSpace(const InterfaceClassification& cls, int degree, int threshold,
                      PatchRule rule = PatchRule::ElementCount);

  const InterfaceClassification& classification() const { return *cls_; }
  int degree() const { return degree_; }
  int threshold() const { return threshold_; }
  PatchRule rule() const { return rule_; }
  int num_dofs() const { return static_cast<int>(dof_element_.size()); }
  /// DOF of an uncut element, -1 for cut elements.
  int dof(int k) const { return element_dof_[k]; }
  int dof_element(int d) const { return dof_element_[d]; }

  /// nullptr if k has no part on `side`.
  const LocalReconstruction* local(int k, int side) const;
  const std::vector<LocalReconstruction>& locals() const { return locals_; }

  /// Jets of every local basis function (columns follow local(k, side)->dofs).
  JetMatrix basis_jets(int k, int side, const Vec2& x) const;
  Jet evaluate(int k, int side, const Vec2& x, const Eigen::VectorXd& u) const;
  double value(int k, int side, const Vec2& x, const Eigen::VectorXd& u) const;

  /// Local reconstructions in whose patch the DOF is a collocation point;
  /// outside these lambda_dof vanishes identically.
  const std::vector<int>& support(int d) const { return support_[d]; }

  /// DOF vector g(x_K) for every uncut element K, with g evaluated on K's
  /// side.
  template <class F>
  Eigen::VectorXd sample(F&& g) const {
    Eigen::VectorXd u(num_dofs());
    for (int d = 0; d < num_dofs(); ++d) {
      const int k = dof_element_[d];
      u(d) = g(cls_->mesh().barycenter(k), side_of(cls_->tag(k)));
    }
    return u;
  }

 private:
  const InterfaceClassification* cls_;
  int degree_;
  int threshold_;
  PatchRule rule_;
  std::vector<int> element_dof_;
  std::vector<int> dof_element_;
  std::vector<LocalReconstruction> locals_;
  std::vector<std::array<int, 2>> local_index_;
  std::vector<std::vector<int>> support_;
};

struct PatchDiagnostics {
  int element = -1;
  int side = -1;
  /// Sampled estimate of Lambda(m, S): max over grid points of the
  /// least-squares Lebesgue function, floored at 1.
  double lambda = 1.0;
  int num_collocation = 0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// 3 if the patch contains a cut element, else 1.
  int cut_factor = 1;
};

struct ReconstructionDiagnostics {
  std::vector<PatchDiagnostics> patches;
  /// max (1 + Lambda(m,S) sqrt(#I)).
  double lambda_m = 0.0;
  double max_lambda = 0.0;
};

/// Estimates (not bounds) of the patch stability constants on a
/// grid_size x grid_size sample grid over each patch.
ReconstructionDiagnostics estimate_lambda_constants(const ReconstructionSpace& space, int grid_size = 20);

/// Sampled Lambda estimate for a given point set: collocation points and
/// additional sample points, basis of the given degree.
double sampled_lambda(const PolynomialBasis& basis, std::span<const Vec2> collocation, std::span<const Vec2> samples);

}  // namespace patchdg

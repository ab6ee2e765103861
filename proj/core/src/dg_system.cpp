#include "patchdg/dg_system.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

#include "patchdg/errors.hpp"

namespace patchdg {

double default_penalty(int degree) { return degree >= 5 ? 35.0 : 20.0; }

namespace {

// Sums local blocks into a sparse matrix through bounded triplet batches.
class SparseAccumulator {
 public:
  explicit SparseAccumulator(int n) : n_(n), result_(n, n) {}

  void add(const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
    const int m = static_cast<int>(dofs.size());
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const double v = local(i, j);
        if (v != 0.0) triplets_.emplace_back(dofs[i], dofs[j], v);
      }
    }
    if (triplets_.size() > kBatch) flush();
  }

  SparseMatrix finish() {
    flush();
    result_.makeCompressed();
    return std::move(result_);
  }

 private:
  static constexpr std::size_t kBatch = std::size_t{1} << 23;

  void flush() {
    if (triplets_.empty()) return;
    SparseMatrix batch(n_, n_);
    batch.setFromTriplets(triplets_.begin(), triplets_.end());
    if (result_.nonZeros() == 0) {
      result_ = std::move(batch);
    } else {
      result_ += batch;
    }
    triplets_.clear();
  }

  int n_;
  SparseMatrix result_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

// Trace quantities of the local basis at one quadrature point, laid out
// over a concatenated DOF list: jump a = [v], averaged flux b = {n.grad(beta
// Lap v)}, normal-derivative jump c = [grad v], average d = {beta Lap v}.
struct TraceVectors {
  Eigen::VectorXd a, b, c, d;

  explicit TraceVectors(int n) : a(n), b(n), c(n), d(n) {}
};

// w [a b^T + b a^T - c d^T - d c^T + mu1 a a^T + mu2 c c^T]
void add_flux_block(Eigen::MatrixXd& m, const TraceVectors& t, double w, double mu1, double mu2) {
  m.noalias() += w * (t.a * t.b.transpose() + t.b * t.a.transpose());
  m.noalias() -= w * (t.c * t.d.transpose() + t.d * t.c.transpose());
  m.noalias() += (w * mu1) * t.a * t.a.transpose();
  m.noalias() += (w * mu2) * t.c * t.c.transpose();
}

std::vector<int> concat(const std::vector<int>& x, const std::vector<int>& y) {
  std::vector<int> out;
  out.reserve(x.size() + y.size());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

int resolved_order(const ReconstructionSpace& space, const AssemblyOptions& options) {
  const int m = space.degree();
  if (m < 2) throw InvalidArgument("the biharmonic discretisation needs degree m >= 2, got " + std::to_string(m));
  const int q = options.quad_order > 0 ? options.quad_order : 2 * m;
  if (q < 2 * m) throw InvalidArgument("quadrature order must be at least 2m");
  if (!(options.penalty.eta > 0.0)) throw InvalidArgument("penalty eta must be positive");
  return q;
}

void scatter_rhs(Eigen::VectorXd& rhs, const std::vector<int>& dofs, const Eigen::VectorXd& local) {
  for (std::size_t i = 0; i < dofs.size(); ++i) rhs(dofs[i]) += local(static_cast<Eigen::Index>(i));
}

// One traversal over elements, faces and interface pieces; either output may
// be null.
void assemble(const ReconstructionSpace& space, const ProblemSpec& problem, const AssemblyOptions& options,
              SparseMatrix* matrix, Eigen::VectorXd* rhs) {
  const int q = resolved_order(space, options);
  const InterfaceClassification& cls = space.classification();
  const Mesh& mesh = cls.mesh();
  const PenaltyConfig& pen = options.penalty;
  const int n = space.num_dofs();
  SparseAccumulator acc(n);
  if (rhs != nullptr) rhs->setZero(n);

  // Bulk terms.
  for (int k = 0; k < mesh.num_elements(); ++k) {
    for (int side = 0; side < 2; ++side) {
      const LocalReconstruction* l = space.local(k, side);
      if (l == nullptr) continue;
      const double beta = problem.beta[side];
      const auto rule = cls.quad_bulk(k, side, q);
      const int nl = static_cast<int>(l->dofs.size());
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nl, nl);
      Eigen::VectorXd r = Eigen::VectorXd::Zero(nl);
      for (const auto& qp : rule.points) {
        const JetMatrix jets = l->basis.jets(qp.x) * l->matrix;
        const Eigen::VectorXd lap = jets.row(kLap).transpose();
        if (matrix) m.noalias() += (qp.weight * beta) * lap * lap.transpose();
        if (rhs) r += (qp.weight * problem.source[side](qp.x)) * jets.row(kValue).transpose();
      }
      if (matrix) acc.add(l->dofs, m);
      if (rhs) scatter_rhs(*rhs, l->dofs, r);
    }
  }

  // Interior and boundary faces, split at interface crossings.
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const double he = mesh.face_length(f);
    for (int side = 0; side < 2; ++side) {
      if (!cls.face_touches_side(f, side)) continue;
      const double beta = problem.beta[side];
      const double mu1 = pen.mu1(he, beta), mu2 = pen.mu2(he, beta);
      const auto rule = cls.quad_face(f, side, q + 1);
      const LocalReconstruction* lp = space.local(face.left, side);
      if (face.is_boundary()) {
        const int nl = static_cast<int>(lp->dofs.size());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nl, nl);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(nl);
        TraceVectors t(nl);
        for (const auto& qp : rule.points) {
          const JetMatrix jp = lp->basis.jets(qp.x) * lp->matrix;
          const Vec2& nv = qp.normal;
          t.a = jp.row(kValue).transpose();
          t.b = beta * (nv.x() * jp.row(kLapDx) + nv.y() * jp.row(kLapDy)).transpose();
          t.c = (nv.x() * jp.row(kDx) + nv.y() * jp.row(kDy)).transpose();
          t.d = beta * jp.row(kLap).transpose();
          if (matrix) add_flux_block(m, t, qp.weight, mu1, mu2);
          if (rhs) {
            const double g1 = problem.g1(qp.x, side);
            const double g2 = problem.g2(qp.x, nv, side);
            r += qp.weight * (g1 * (t.b + mu1 * t.a) + g2 * (mu2 * t.c - t.d));
          }
        }
        if (matrix) acc.add(lp->dofs, m);
        if (rhs) scatter_rhs(*rhs, lp->dofs, r);
        continue;
      }
      if (!matrix) continue;
      const LocalReconstruction* lm = space.local(face.right, side);
      const int np = static_cast<int>(lp->dofs.size());
      const int nm = static_cast<int>(lm->dofs.size());
      const auto dofs = concat(lp->dofs, lm->dofs);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(np + nm, np + nm);
      TraceVectors t(np + nm);
      for (const auto& qp : rule.points) {
        const JetMatrix jp = lp->basis.jets(qp.x) * lp->matrix;
        const JetMatrix jm = lm->basis.jets(qp.x) * lm->matrix;
        const Vec2& nv = qp.normal;
        t.a << jp.row(kValue).transpose(), -jm.row(kValue).transpose();
        t.b << (0.5 * beta) * (nv.x() * jp.row(kLapDx) + nv.y() * jp.row(kLapDy)).transpose(),
            (0.5 * beta) * (nv.x() * jm.row(kLapDx) + nv.y() * jm.row(kLapDy)).transpose();
        t.c << (nv.x() * jp.row(kDx) + nv.y() * jp.row(kDy)).transpose(),
            -(nv.x() * jm.row(kDx) + nv.y() * jm.row(kDy)).transpose();
        t.d << (0.5 * beta) * jp.row(kLap).transpose(), (0.5 * beta) * jm.row(kLap).transpose();
        add_flux_block(m, t, qp.weight, mu1, mu2);
      }
      acc.add(dofs, m);
    }
  }

  // Interface pieces.
  const double b0 = problem.beta[0], b1 = problem.beta[1];
  for (int k : cls.cut_elements()) {
    const LocalReconstruction* l0 = space.local(k, 0);
    const LocalReconstruction* l1 = space.local(k, 1);
    const double hk = mesh.diameter(k);
    const double beta_avg = 0.5 * (problem.beta[0] + problem.beta[1]);
    const double mu1 = pen.mu1(hk, beta_avg), mu2 = pen.mu2(hk, beta_avg);
    const auto rule = cls.quad_interface(k, q + 1);
    const int n0 = static_cast<int>(l0->dofs.size());
    const int n1 = static_cast<int>(l1->dofs.size());
    const auto dofs = concat(l0->dofs, l1->dofs);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n0 + n1, n0 + n1);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n0 + n1);
    TraceVectors t(n0 + n1);
    Eigen::VectorXd avg_dn(n0 + n1), avg_v(n0 + n1);
    for (const auto& qp : rule.points) {
      const JetMatrix j0 = l0->basis.jets(qp.x) * l0->matrix;
      const JetMatrix j1 = l1->basis.jets(qp.x) * l1->matrix;
      const Vec2& nv = qp.normal;
      const Eigen::VectorXd dn0 = (nv.x() * j0.row(kDx) + nv.y() * j0.row(kDy)).transpose();
      const Eigen::VectorXd dn1 = (nv.x() * j1.row(kDx) + nv.y() * j1.row(kDy)).transpose();
      t.a << j0.row(kValue).transpose(), -j1.row(kValue).transpose();
      t.b << (0.5 * b0) * (nv.x() * j0.row(kLapDx) + nv.y() * j0.row(kLapDy)).transpose(),
          (0.5 * b1) * (nv.x() * j1.row(kLapDx) + nv.y() * j1.row(kLapDy)).transpose();
      t.c << dn0, -dn1;
      t.d << (0.5 * b0) * j0.row(kLap).transpose(), (0.5 * b1) * j1.row(kLap).transpose();
      if (matrix) add_flux_block(m, t, qp.weight, mu1, mu2);
      if (rhs) {
        avg_dn << 0.5 * dn0, 0.5 * dn1;
        avg_v << 0.5 * j0.row(kValue).transpose(), 0.5 * j1.row(kValue).transpose();
        const double a1 = problem.a1(qp.x, nv);
        const double a2 = problem.a2(qp.x, nv);
        const double a3 = problem.a3(qp.x, nv);
        const double a4 = problem.a4(qp.x, nv);
        r += qp.weight * (a1 * t.b - a2 * t.d + a3 * avg_dn - a4 * avg_v + (mu1 * a1) * t.a + (mu2 * a2) * t.c);
      }
    }
    if (matrix) acc.add(dofs, m);
    if (rhs) scatter_rhs(*rhs, dofs, r);
  }

  if (matrix) *matrix = acc.finish();
}

}  // namespace

SparseMatrix assemble_bilinear(const ReconstructionSpace& space, const ProblemSpec& problem,
                               const AssemblyOptions& options) {
  SparseMatrix a;
  assemble(space, problem, options, &a, nullptr);
  return a;
}

Eigen::VectorXd assemble_linear(const ReconstructionSpace& space, const ProblemSpec& problem,
                                const AssemblyOptions& options) {
  Eigen::VectorXd b;
  assemble(space, problem, options, nullptr, &b);
  return b;
}

LinearSystem assemble_system(const ReconstructionSpace& space, const ProblemSpec& problem,
                             const AssemblyOptions& options) {
  LinearSystem sys;
  assemble(space, problem, options, &sys.matrix, &sys.rhs);
  return sys;
}

double galerkin_residual(const SparseMatrix& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = a * x - b;
  const double nb = b.norm();
  return nb > 0.0 ? r.norm() / nb : r.norm();
}

double symmetry_defect(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  }
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  }
  return amax > 0.0 ? dmax / amax : 0.0;
}

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  out << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  }
}

void write_vector(const Eigen::VectorXd& b, std::ostream& out) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < b.size(); ++i) out << i << ' ' << b(i) << '\n';
}

}  // namespace patchdg

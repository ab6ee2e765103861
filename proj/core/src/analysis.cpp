#include "patchdg/analysis.hpp"

#include <cmath>
#include <random>

#include "patchdg/errors.hpp"

namespace patchdg {

double NormBreakdown::dg_squared() const {
  return volume + face_value_jump + face_grad_jump + boundary_value_jump + boundary_grad_jump +
         interface_value_jump + interface_grad_jump;
}

double NormBreakdown::energy_squared() const {
  return dg_squared() + face_avg_grad_lap + face_avg_lap + interface_avg_lap + interface_avg_grad_lap;
}

std::vector<double> eoc(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw InvalidArgument("eoc: h and error lists differ in length");
  if (h.size() < 2) throw InvalidArgument("eoc: need at least two reports");
  std::vector<double> rates;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (!(h[k] < h[k - 1])) throw NonMonotoneH("eoc: h must strictly decrease (row " + std::to_string(k) + ")");
    rates.push_back(std::log(err[k - 1] / err[k]) / std::log(h[k - 1] / h[k]));
  }
  return rates;
}

namespace {

template <class Pick>
std::vector<double> rates_of(const std::vector<ErrorReport>& rows, Pick pick) {
  std::vector<double> h, e;
  for (const auto& r : rows) {
    h.push_back(r.h);
    e.push_back(pick(r));
  }
  return eoc(h, e);
}

// Error jet (exact minus discrete) of one side of an element.
class SideError {
 public:
  SideError(const ReconstructionSpace& space, const ProblemSpec* problem, const Eigen::VectorXd& u, int k, int side)
      : local_(space.local(k, side)), problem_(problem), side_(side) {
    if (local_ == nullptr) return;
    Eigen::VectorXd w(local_->dofs.size());
    for (std::size_t i = 0; i < local_->dofs.size(); ++i) w(static_cast<Eigen::Index>(i)) = u(local_->dofs[i]);
    coeffs_ = local_->matrix * w;
  }

  bool valid() const { return local_ != nullptr; }

  Jet operator()(const Vec2& x) const {
    const Jet uh = jet_from_column(local_->basis.jets(x) * coeffs_);
    Jet exact;
    if (problem_ != nullptr) exact = problem_->exact[side_](x);
    return exact - uh;
  }

 private:
  const LocalReconstruction* local_;
  const ProblemSpec* problem_;
  int side_;
  Eigen::VectorXd coeffs_;
};

}  // namespace

std::vector<double> ConvergenceTable::energy_rates() const {
  return rates_of(rows_, [](const ErrorReport& r) { return r.energy_error; });
}
std::vector<double> ConvergenceTable::dg_rates() const {
  return rates_of(rows_, [](const ErrorReport& r) { return r.dg_error; });
}
std::vector<double> ConvergenceTable::l2_rates() const {
  return rates_of(rows_, [](const ErrorReport& r) { return r.l2_error; });
}

ErrorReport energy_norms(const ReconstructionSpace& space, const ProblemSpec* problem, const Eigen::VectorXd& u_h,
                         int quad_order) {
  if (u_h.size() != space.num_dofs()) throw InvalidArgument("energy_norms: DOF vector has the wrong size");
  if (problem != nullptr && !problem->has_exact()) throw InvalidArgument("energy_norms: problem has no exact solution");
  const int q = quad_order > 0 ? quad_order : 2 * space.degree() + 2;
  const InterfaceClassification& cls = space.classification();
  const Mesh& mesh = cls.mesh();

  ErrorReport rep;
  rep.h = mesh.h();
  rep.dofs = space.num_dofs();
  NormBreakdown& b = rep.breakdown;
  double l2 = 0.0;

  for (int k = 0; k < mesh.num_elements(); ++k) {
    for (int side = 0; side < 2; ++side) {
      const SideError ev(space, problem, u_h, k, side);
      if (!ev.valid()) continue;
      for (const auto& qp : cls.quad_bulk(k, side, q).points) {
        const Jet e = ev(qp.x);
        b.volume += qp.weight * e.lap * e.lap;
        l2 += qp.weight * e.value * e.value;
      }
    }
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const double he = mesh.face_length(f);
    for (int side = 0; side < 2; ++side) {
      if (!cls.face_touches_side(f, side)) continue;
      const SideError ep(space, problem, u_h, face.left, side);
      const auto rule = cls.quad_face(f, side, q);
      if (face.is_boundary()) {
        for (const auto& qp : rule.points) {
          const Jet e = ep(qp.x);
          const double dn = qp.normal.dot(e.grad);
          b.boundary_value_jump += qp.weight * e.value * e.value / (he * he * he);
          b.boundary_grad_jump += qp.weight * dn * dn / he;
          b.face_avg_grad_lap += qp.weight * he * he * he * e.grad_lap.squaredNorm();
          b.face_avg_lap += qp.weight * he * e.lap * e.lap;
        }
        continue;
      }
      const SideError em(space, problem, u_h, face.right, side);
      for (const auto& qp : rule.points) {
        const Jet ap = ep(qp.x);
        const Jet am = em(qp.x);
        const double jv = ap.value - am.value;
        const double jg = qp.normal.dot(ap.grad - am.grad);
        const Vec2 avg_gl = 0.5 * (ap.grad_lap + am.grad_lap);
        const double avg_l = 0.5 * (ap.lap + am.lap);
        b.face_value_jump += qp.weight * jv * jv / (he * he * he);
        b.face_grad_jump += qp.weight * jg * jg / he;
        b.face_avg_grad_lap += qp.weight * he * he * he * avg_gl.squaredNorm();
        b.face_avg_lap += qp.weight * he * avg_l * avg_l;
      }
    }
  }

  for (int k : cls.cut_elements()) {
    const double hk = mesh.diameter(k);
    const SideError e0(space, problem, u_h, k, 0);
    const SideError e1(space, problem, u_h, k, 1);
    for (const auto& qp : cls.quad_interface(k, q).points) {
      const Jet a0 = e0(qp.x);
      const Jet a1 = e1(qp.x);
      const double jv = a0.value - a1.value;
      const double jg = qp.normal.dot(a0.grad - a1.grad);
      const Vec2 avg_gl = 0.5 * (a0.grad_lap + a1.grad_lap);
      const double avg_l = 0.5 * (a0.lap + a1.lap);
      b.interface_value_jump += qp.weight * jv * jv / (hk * hk * hk);
      b.interface_grad_jump += qp.weight * jg * jg / hk;
      b.interface_avg_lap += qp.weight * hk * avg_l * avg_l;
      b.interface_avg_grad_lap += qp.weight * hk * hk * hk * avg_gl.squaredNorm();
    }
  }

  rep.dg_error = std::sqrt(b.dg_squared());
  rep.energy_error = std::sqrt(b.energy_squared());
  rep.l2_error = std::sqrt(l2);
  return rep;
}

double l2_error(const ReconstructionSpace& space, const ProblemSpec* problem, const Eigen::VectorXd& u_h,
                int quad_order) {
  return energy_norms(space, problem, u_h, quad_order).l2_error;
}

double norm_equivalence_probe(const ReconstructionSpace& space, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("norm_equivalence_probe: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  Eigen::VectorXd w(space.num_dofs());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = dist(rng);
    const ErrorReport r = energy_norms(space, nullptr, w);
    worst = std::max(worst, r.energy_error / r.dg_error);
  }
  return worst;
}

}  // namespace patchdg

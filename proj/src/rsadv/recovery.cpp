#include "rsadv/recovery.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <Eigen/LU>

#include "rsadv/error.hpp"
#include "rsadv/quadrature.hpp"

namespace rsadv {

SpaceTag broken_tag(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::CG1: return SpaceTag::DG1;
    case SpaceTag::DG0xCG1: return SpaceTag::DG0xDG1;
    case SpaceTag::CG1xCG1: return SpaceTag::DG1xDG1;
    case SpaceTag::RT0: return SpaceTag::BrokenRT0;
    case SpaceTag::VectorCG1xCG1: return SpaceTag::VectorDG1xDG1;
    default: return tag;
  }
}

std::vector<int> contributor_counts(const FunctionSpace& tgt) {
  std::vector<int> count(tgt.n_dofs(), 0);
  for (int cell = 0; cell < tgt.mesh().n_cells(); ++cell)
    for (int g : tgt.cell_dofs(cell)) ++count[g];
  return count;
}

SpMat averaging_matrix(const FunctionSpace& src, const FunctionSpace& tgt) {
  check_compatible(src, tgt);
  const std::vector<int> count = contributor_counts(tgt);
  std::vector<Eigen::Triplet<double>> trip;
  double phi[4];
  for (int cell = 0; cell < tgt.mesh().n_cells(); ++cell) {
    for (int k = 0; k < tgt.n_components(); ++k) {
      const auto rows = tgt.dof_map(cell, k);
      const auto cols = src.dof_map(cell, k);
      for (std::size_t l = 0; l < rows.size(); ++l) {
        src.basis(k, tgt.local_point(k, static_cast<int>(l)), phi);
        const double w = 1.0 / count[rows[l]];
        for (std::size_t j = 0; j < cols.size(); ++j)
          if (phi[j] != 0.0) trip.emplace_back(rows[l], cols[j], w * phi[j]);
      }
    }
  }
  SpMat A(tgt.n_dofs(), src.n_dofs());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

bool is_recovery_pair(SpaceTag src, SpaceTag tgt) {
  using T = SpaceTag;
  static const std::pair<T, T> pairs[] = {
      {T::DG0, T::CG1},
      {T::CG1, T::CG1},
      {T::DG1, T::CG1},
      {T::DG0, T::DG0},
      {T::DG0xDG0, T::CG1xCG1},
      {T::DG0xCG1, T::CG1xCG1},
      {T::DG1xDG1, T::CG1xCG1},
      {T::CG1xCG1, T::CG1xCG1},
      {T::DG0xDG1, T::DG0xCG1},
      {T::DG0xDG0, T::DG0xDG0},
      {T::RT0, T::VectorCG1xCG1},
      {T::BrokenRT0, T::RT0},
      {T::VectorDG1xDG1, T::VectorCG1xCG1},
      {T::VectorCG1xCG1, T::VectorCG1xCG1},
  };
  return std::find(std::begin(pairs), std::end(pairs), std::make_pair(src, tgt)) != std::end(pairs);
}

bool embeds(const FunctionSpace& src, const FunctionSpace& tgt) {
  if (src.n_components() != tgt.n_components()) return false;
  for (int k = 0; k < src.n_components(); ++k)
    for (int axis = 0; axis < 2; ++axis)
      if (src.degree(k, axis) > tgt.degree(k, axis)) return false;
  return true;
}

namespace {

std::string pair_name(const FunctionSpace& a, const FunctionSpace& b) {
  std::ostringstream os;
  os << to_string(a.tag()) << " -> " << to_string(b.tag());
  return os.str();
}

double cell_mean(const Field& f, int cell, int component) {
  static const CellQuadrature q2 = cell_quadrature(2, 2);
  static const CellQuadrature q1 = cell_quadrature(1, 2);
  const CellQuadrature& q = f.space->mesh().dim() == 1 ? q1 : q2;
  double s = 0.0;
  for (int iq = 0; iq < q.size(); ++iq) s += q.weights[iq] * evaluate(f, cell, q.points[iq], component);
  return s;
}

}  // namespace

L2Projector::L2Projector(SpacePtr src, SpacePtr tgt) : src_(std::move(src)), tgt_(std::move(tgt)) {
  check_compatible(*src_, *tgt_);
  if (!tgt_->fully_broken()) {
    mixed_ = mixed_mass_matrix(*tgt_, *src_);
    solver_ = std::make_shared<MassSolver>(mass_matrix(*tgt_));
    return;
  }
  const Mesh& m = tgt_->mesh();
  const CellQuadrature q = cell_quadrature(m.dim(), 2);
  std::vector<Eigen::Triplet<double>> trip;
  double pt[4], ps[4];
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    for (int k = 0; k < tgt_->n_components(); ++k) {
      const auto rows = tgt_->dof_map(cell, k);
      const auto cols = src_->dof_map(cell, k);
      const int nt = static_cast<int>(rows.size());
      const int ns = static_cast<int>(cols.size());
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nt, nt);
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nt, ns);
      for (int iq = 0; iq < q.size(); ++iq) {
        tgt_->basis(k, q.points[iq], pt);
        src_->basis(k, q.points[iq], ps);
        for (int i = 0; i < nt; ++i) {
          for (int j = 0; j < nt; ++j) M(i, j) += q.weights[iq] * pt[i] * pt[j];
          for (int j = 0; j < ns; ++j) B(i, j) += q.weights[iq] * pt[i] * ps[j];
        }
      }
      const Eigen::MatrixXd P = M.ldlt().solve(B);
      for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j)
          if (P(i, j) != 0.0) trip.emplace_back(rows[i], cols[j], P(i, j));
    }
  }
  explicit_.resize(tgt_->n_dofs(), src_->n_dofs());
  explicit_.setFromTriplets(trip.begin(), trip.end());
}

Field L2Projector::apply(const Field& f) const {
  if (f.space->tag() != src_->tag() || !(f.space->mesh() == src_->mesh()))
    fail(ErrorCode::SpaceMismatch, "projection source does not match the field");
  if (solver_) return Field(tgt_, solver_->solve(mixed_ * f.coeffs));
  return Field(tgt_, explicit_ * f.coeffs);
}

BoundaryRecovery::BoundaryRecovery(SpacePtr v0, SpacePtr vt) : v0_(std::move(v0)), vt_(std::move(vt)) {
  if (!is_recovery_pair(v0_->tag(), vt_->tag()))
    fail(ErrorCode::UnsupportedPair, "no recovery rule for " + pair_name(*v0_, *vt_));
  const Mesh& m = v0_->mesh();
  if (!m.has_exterior_facets())
    fail(ErrorCode::InvalidArgument, "boundary recovery needs a mesh with walls");
  vb_ = make_space(vt_->mesh_ptr(), broken_tag(vt_->tag()));
  average_ = averaging_matrix(*v0_, *vt_);
  to_broken_ = averaging_matrix(*vt_, *vb_);
  back_ = averaging_matrix(*vb_, *vt_);

  const CellQuadrature q = cell_quadrature(m.dim(), 2);
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    const int ix = m.cell_ix(cell);
    const int iz = m.cell_iz(cell);
    for (int k = 0; k < v0_->n_components(); ++k) {
      const ComponentSpec& c = v0_->component(k);
      const bool z_walls = c.fz == Family::DG0;
      const bool x_walls = !m.periodic_x() && c.fx == Family::DG0;
      if (!z_walls && !x_walls) continue;
      std::vector<int> interior;
      bool touches = false;
      const int n = vt_->local_size(k);
      for (int l = 0; l < n; ++l) {
        const RefPoint p = vt_->local_point(k, l);
        bool on_wall = false;
        if (z_walls && ((iz == 0 && p.t == 0.0) || (iz == m.nz() - 1 && p.t == 1.0))) on_wall = true;
        if (x_walls && ((ix == 0 && p.s == 0.0) || (ix == m.nx() - 1 && p.s == 1.0))) on_wall = true;
        if (on_wall)
          touches = true;
        else
          interior.push_back(l);
      }
      if (!touches) continue;

      std::vector<int> key = interior;
      key.push_back(-1 - k);
      auto it = kkt_cache_.find(key);
      if (it == kkt_cache_.end()) {
        // Minimise the Dirichlet energy subject to the interior values and
        // the cell mean.
        const int ncon = static_cast<int>(interior.size()) + 1;
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(n);
        double gx[4], gz[4], phi[4];
        for (int iq = 0; iq < q.size(); ++iq) {
          vt_->basis_grad(k, q.points[iq], gx, gz);
          vt_->basis(k, q.points[iq], phi);
          for (int i = 0; i < n; ++i) {
            mean(i) += q.weights[iq] * phi[i];
            for (int j = 0; j < n; ++j) K(i, j) += q.weights[iq] * (gx[i] * gx[j] + gz[i] * gz[j]);
          }
        }
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + ncon, n + ncon);
        kkt.topLeftCorner(n, n) = 2.0 * K;
        for (int r = 0; r < ncon - 1; ++r) {
          kkt(n + r, interior[r]) = 1.0;
          kkt(interior[r], n + r) = 1.0;
        }
        kkt.block(n + ncon - 1, 0, 1, n) = mean;
        kkt.block(0, n + ncon - 1, n, 1) = mean.transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (lu.rank() < n + ncon)
          fail(ErrorCode::SingularKkt, "boundary recovery constraints are degenerate");
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + ncon, ncon);
        rhs.bottomRows(ncon).setIdentity();
        const Eigen::MatrixXd sol = lu.solve(rhs);
        it = kkt_cache_.emplace(key, sol.topRows(n)).first;
      }
      rules_.push_back({cell, k, interior, &it->second});
    }
  }
}

Field BoundaryRecovery::apply(const Field& src) const {
  if (src.space->tag() != v0_->tag() || !(src.space->mesh() == v0_->mesh()))
    fail(ErrorCode::SpaceMismatch, "boundary recovery source does not match");
  const Eigen::VectorXd rr = average_ * src.coeffs;
  Eigen::VectorXd rho1 = to_broken_ * rr;
  Eigen::VectorXd d;
  for (const CellRule& rule : rules_) {
    const auto tdofs = vt_->dof_map(rule.cell, rule.component);
    const auto bdofs = vb_->dof_map(rule.cell, rule.component);
    const int ni = static_cast<int>(rule.interior.size());
    d.resize(ni + 1);
    for (int r = 0; r < ni; ++r) d[r] = rr[tdofs[rule.interior[r]]];
    d[ni] = cell_mean(src, rule.cell, rule.component);
    const Eigen::VectorXd u = (*rule.map) * d;
    for (int l = 0; l < u.size(); ++l) rho1[bdofs[l]] = u[l];
  }
  return Field(vt_, back_ * rho1);
}

Field recover_average(const Field& src, const SpacePtr& target) {
  if (!is_recovery_pair(src.space->tag(), target->tag()))
    fail(ErrorCode::UnsupportedPair, "no recovery rule for " + pair_name(*src.space, *target));
  return Field(target, averaging_matrix(*src.space, *target) * src.coeffs);
}

Field recover_with_boundary(const Field& src, const SpacePtr& target) {
  return BoundaryRecovery(src.space, target).apply(src);
}

Field project_broken(const Field& src, const SpacePtr& target) {
  if (!target->fully_broken())
    fail(ErrorCode::UnsupportedPair, "broken projection needs a broken target, got " +
                                         pair_name(*src.space, *target));
  return L2Projector(src.space, target).apply(src);
}

Field inject(const Field& src, const SpacePtr& target) {
  check_compatible(*src.space, *target);
  if (!target->fully_broken() || !embeds(*src.space, *target))
    fail(ErrorCode::NonEmbeddable, "cannot inject " + pair_name(*src.space, *target));
  return Field(target, averaging_matrix(*src.space, *target) * src.coeffs);
}

Field project_PA(const Field& src, const SpacePtr& target) {
  return L2Projector(src.space, target).apply(src);
}

Field project_PB(const Field& src, const SpacePtr& target) {
  const SpacePtr vh = make_space(target->mesh_ptr(), broken_tag(target->tag()));
  check_compatible(*src.space, *vh);
  if (!is_recovery_pair(vh->tag(), target->tag()))
    fail(ErrorCode::UnsupportedPair, "no bounded projection onto " + std::string(to_string(target->tag())));
  const Eigen::VectorXd broken = averaging_matrix(*src.space, *vh) * src.coeffs;
  return Field(target, averaging_matrix(*vh, *target) * broken);
}

const std::vector<Quadruple>& supported_quadruples() {
  using T = SpaceTag;
  static const std::vector<Quadruple> list = {
      {T::DG0, T::DG1, T::CG1, T::DG0},
      {T::CG1, T::DG1, T::CG1, T::DG1},
      {T::DG0xDG0, T::DG1xDG1, T::CG1xCG1, T::DG0xDG0},
      {T::RT0, T::VectorDG1xDG1, T::VectorCG1xCG1, T::BrokenRT0},
      {T::DG0xCG1, T::DG1xDG1, T::CG1xCG1, T::DG0xDG1},
  };
  return list;
}

SchemeOperators::SchemeOperators(MeshPtr mesh, Quadruple q, Projection projection, bool boundary_recovery)
    : projection_(projection) {
  const auto& list = supported_quadruples();
  if (std::find(list.begin(), list.end(), q) == list.end()) {
    std::ostringstream os;
    os << "unsupported space quadruple (" << to_string(q.v0) << ", " << to_string(q.v1) << ", "
       << to_string(q.vt) << ", " << to_string(q.vh) << ")";
    fail(ErrorCode::UnsupportedPair, os.str());
  }
  v0_ = make_space(mesh, q.v0);
  v1_ = make_space(mesh, q.v1);
  vt_ = make_space(mesh, q.vt);
  vh_ = make_space(mesh, q.vh);
  average_ = averaging_matrix(*v0_, *vt_);
  inject_t_ = averaging_matrix(*vt_, *v1_);
  inject_h_ = averaging_matrix(*vh_, *v1_);
  inject_0_ = averaging_matrix(*v0_, *v1_);
  hat_ = std::make_unique<L2Projector>(vt_, vh_);
  if (projection_ == Projection::A) {
    pa_ = std::make_unique<L2Projector>(v1_, v0_);
  } else {
    interp_h_ = averaging_matrix(*v1_, *vh_);
    average_h0_ = averaging_matrix(*vh_, *v0_);
  }
  if (boundary_recovery && mesh->has_exterior_facets())
    boundary_ = std::make_unique<BoundaryRecovery>(v0_, vt_);
}

void SchemeOperators::check_v0(const Field& rho) const {
  if (rho.space->tag() != v0_->tag() || !(rho.space->mesh() == v0_->mesh()))
    fail(ErrorCode::SpaceMismatch, "field is not in the scheme's V0 space");
}

Field SchemeOperators::recover(const Field& rho) const {
  check_v0(rho);
  if (boundary_) return boundary_->apply(rho);
  return Field(vt_, average_ * rho.coeffs);
}

Field SchemeOperators::project_hat(const Field& recovered) const { return hat_->apply(recovered); }

Field SchemeOperators::apply_j(const Field& rho) const {
  const Field r = recover(rho);
  const Field rh = hat_->apply(r);
  Eigen::VectorXd out = inject_t_ * r.coeffs;
  out -= inject_h_ * rh.coeffs;
  out += inject_0_ * rho.coeffs;
  return Field(v1_, std::move(out));
}

Field SchemeOperators::project(const Field& q) const {
  if (q.space->tag() != v1_->tag() || !(q.space->mesh() == v1_->mesh()))
    fail(ErrorCode::SpaceMismatch, "field is not in the scheme's V1 space");
  if (projection_ == Projection::A) return pa_->apply(q);
  const Eigen::VectorXd broken = interp_h_ * q.coeffs;
  return Field(v0_, average_h0_ * broken);
}

}  // namespace rsadv

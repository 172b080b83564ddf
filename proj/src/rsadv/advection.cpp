#include "rsadv/advection.hpp"

#include "rsadv/error.hpp"
#include "rsadv/quadrature.hpp"

namespace rsadv {

namespace {

RefPoint facet_ref_point(int dim, int local_facet, double param) {
  if (dim == 1) return {local_facet == 0 ? 0.0 : 1.0, 0.5};
  switch (local_facet) {
    case 0: return {0.0, param};
    case 1: return {1.0, param};
    case 2: return {param, 0.0};
    default: return {param, 1.0};
  }
}

}  // namespace

AdvectionOperator::AdvectionOperator(SpacePtr space) : space_(std::move(space)) {
  const FunctionSpace& s = *space_;
  const Mesh& m = s.mesh();
  if (!s.fully_broken()) fail(ErrorCode::SpaceMismatch, "advection needs a fully discontinuous space");
  for (int k = 0; k < s.n_components(); ++k) {
    const ComponentSpec& c = s.component(k);
    const bool ok = c.fx == Family::DG1 && (m.dim() == 1 ? c.fz == Family::None : c.fz == Family::DG1);
    if (!ok)
      fail(ErrorCode::SpaceMismatch,
           std::string("advection needs a (bi)linear discontinuous space, got ") + to_string(s.tag()));
  }
  nloc_ = s.local_size(0);
  const CellQuadrature q = cell_quadrature(m.dim(), 2);
  cell_w_ = q.weights;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nloc_, nloc_);
  cell_phi_.resize(q.size() * nloc_);
  cell_gx_.resize(q.size() * nloc_);
  cell_gz_.resize(q.size() * nloc_);
  for (int iq = 0; iq < q.size(); ++iq) {
    double* phi = &cell_phi_[iq * nloc_];
    s.basis(0, q.points[iq], phi);
    s.basis_grad(0, q.points[iq], &cell_gx_[iq * nloc_], &cell_gz_[iq * nloc_]);
    for (int i = 0; i < nloc_; ++i)
      for (int j = 0; j < nloc_; ++j) M(i, j) += q.weights[iq] * phi[i] * phi[j];
  }
  inv_mass_ = M.inverse() / m.cell_measure();

  std::vector<double> params;
  if (m.dim() == 1) {
    params = {0.5};
    facet_w_ = {1.0};
  } else {
    const GaussRule1D g = gauss_legendre(2);
    params = g.points;
    facet_w_ = g.weights;
  }
  nfp_ = static_cast<int>(params.size());
  const int nfc = m.facets_per_cell();
  trace_.resize(static_cast<std::size_t>(nfc) * nfp_ * nloc_);
  for (int lf = 0; lf < nfc; ++lf)
    for (int j = 0; j < nfp_; ++j)
      s.basis(0, facet_ref_point(m.dim(), lf, params[j]), &trace_[(lf * nfp_ + j) * nloc_]);
}

Eigen::VectorXd AdvectionOperator::euler_increment(const Eigen::VectorXd& q, const VelocitySamples& v,
                                                   double dt) const {
  const FunctionSpace& s = *space_;
  const Mesh& m = s.mesh();
  const int nq = static_cast<int>(cell_w_.size());
  const int nfc = m.facets_per_cell();
  const double vol = m.cell_measure();
  Eigen::VectorXd out(q.size());
  double qe[4], qn[4], rhs[4];
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto facets = m.cell_facets(c);
    for (int k = 0; k < s.n_components(); ++k) {
      const auto dofs = s.dof_map(c, k);
      for (int i = 0; i < nloc_; ++i) {
        qe[i] = q[dofs[i]];
        rhs[i] = 0.0;
      }
      // Volume term: - int psi v . grad q.
      for (int iq = 0; iq < nq; ++iq) {
        const Vec2& vel = v.cell[static_cast<std::size_t>(c) * nq + iq];
        double gx = 0.0, gz = 0.0;
        const double* dx = &cell_gx_[iq * nloc_];
        const double* dz = &cell_gz_[iq * nloc_];
        for (int j = 0; j < nloc_; ++j) {
          gx += dx[j] * qe[j];
          gz += dz[j] * qe[j];
        }
        const double a = -cell_w_[iq] * vol * (vel.x() * gx + vel.y() * gz);
        const double* phi = &cell_phi_[iq * nloc_];
        for (int i = 0; i < nloc_; ++i) rhs[i] += a * phi[i];
      }
      // Inflow facets: int psi (v . n_e) (q_e - q_upwind).
      for (int lf = 0; lf < nfc; ++lf) {
        const CellFacet cf = facets[lf];
        const Facet& f = m.facet(cf.facet);
        if (f.exterior()) continue;
        const int nb = f.cells[1 - cf.side];
        const auto nb_dofs = s.dof_map(nb, k);
        for (int j = 0; j < nloc_; ++j) qn[j] = q[nb_dofs[j]];
        const double sign = cf.side == 0 ? 1.0 : -1.0;
        const double meas = m.facet_measure(f.axis);
        const double* te = &trace_[(lf * nfp_) * nloc_];
        const double* tn = &trace_[((lf ^ 1) * nfp_) * nloc_];
        for (int jp = 0; jp < nfp_; ++jp) {
          const double vn = sign * v.facet_flux[static_cast<std::size_t>(cf.facet) * nfp_ + jp];
          if (!(vn < 0.0)) continue;
          const double* pe = te + jp * nloc_;
          const double* pn = tn + jp * nloc_;
          double ve = 0.0, vnb = 0.0;
          for (int j = 0; j < nloc_; ++j) {
            ve += pe[j] * qe[j];
            vnb += pn[j] * qn[j];
          }
          const double a = facet_w_[jp] * meas * vn * (ve - vnb);
          for (int i = 0; i < nloc_; ++i) rhs[i] += a * pe[i];
        }
      }
      for (int i = 0; i < nloc_; ++i) {
        double d = 0.0;
        for (int j = 0; j < nloc_; ++j) d += inv_mass_(i, j) * rhs[j];
        out[dofs[i]] = dt * d;
      }
    }
  }
  return out;
}

Field AdvectionOperator::euler_increment(const Field& q, VelocitySampler& sampler, double t,
                                         double dt) const {
  if (q.space->tag() != space_->tag() || !(q.space->mesh() == space_->mesh()))
    fail(ErrorCode::SpaceMismatch, "advected field is not in the operator's space");
  return Field(q.space, euler_increment(q.coeffs, sampler.at(t), dt));
}

void AdvectionOperator::ssprk3_step(Eigen::VectorXd& q, VelocitySampler& sampler, double t, double dt,
                                    const VertexLimiter* limiter) const {
  if (limiter) limiter->apply(q);
  stage_ = q + euler_increment(q, sampler.at(t), dt);
  if (limiter) limiter->apply(stage_);
  work_ = stage_ + euler_increment(stage_, sampler.at(t + dt), dt);
  stage_ = q + 0.25 * (work_ - q);
  if (limiter) limiter->apply(stage_);
  work_ = stage_ + euler_increment(stage_, sampler.at(t + 0.5 * dt), dt);
  q += (2.0 / 3.0) * (work_ - q);
  if (limiter) limiter->apply(q);
}

Field AdvectionOperator::ssprk3_step(const Field& q, VelocitySampler& sampler, double t, double dt,
                                     const VertexLimiter* limiter) const {
  if (q.space->tag() != space_->tag() || !(q.space->mesh() == space_->mesh()))
    fail(ErrorCode::SpaceMismatch, "advected field is not in the operator's space");
  Field out = q;
  ssprk3_step(out.coeffs, sampler, t, dt, limiter);
  return out;
}

}  // namespace rsadv

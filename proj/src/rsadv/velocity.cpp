#include "rsadv/velocity.hpp"

#include <cmath>
#include <sstream>

#include "rsadv/error.hpp"
#include "rsadv/quadrature.hpp"

namespace rsadv {

VelocityField constant_velocity(Vec2 v) {
  VelocityField f;
  f.value = [v](double, double, double) { return v; };
  f.steady = true;
  return f;
}

VelocityField zero_velocity() { return constant_velocity(Vec2::Zero()); }

Vec2 facet_point(const Mesh& mesh, int facet, double param) {
  const Facet& f = mesh.facet(facet);
  const int owner = f.cells[0];
  if (mesh.dim() == 1) return mesh.to_physical(owner, {f.exterior() ? 0.0 : 1.0, 0.5});
  // The owner cell sees an interior facet on its east or north side.
  const bool high = f.exterior() ? f.normal[f.axis] > 0.0 : true;
  const double edge = high ? 1.0 : 0.0;
  if (f.axis == 0) return mesh.to_physical(owner, {edge, param});
  return mesh.to_physical(owner, {param, edge});
}

VelocitySampler::VelocitySampler(MeshPtr mesh, VelocityField velocity)
    : mesh_(std::move(mesh)), velocity_(std::move(velocity)) {
  if (!velocity_.value) fail(ErrorCode::InvalidArgument, "velocity field has no value function");
  const CellQuadrature q = cell_quadrature(mesh_->dim(), 2);
  cell_points_ = q.points;
  cell_weights_ = q.weights;
  if (mesh_->dim() == 1) {
    facet_params_ = {0.5};
    facet_weights_ = {1.0};
  } else {
    const GaussRule1D g = gauss_legendre(2);
    facet_params_ = g.points;
    facet_weights_ = g.weights;
  }
}

void VelocitySampler::fill(double t, VelocitySamples& out) const {
  const Mesh& m = *mesh_;
  const int nq = static_cast<int>(cell_points_.size());
  const int nf = static_cast<int>(facet_params_.size());
  out.points_per_cell = nq;
  out.points_per_facet = nf;
  out.cell.resize(static_cast<std::size_t>(m.n_cells()) * nq);
  out.facet_flux.resize(static_cast<std::size_t>(m.n_facets()) * nf);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int j = 0; j < nq; ++j) {
      const Vec2 x = m.to_physical(c, cell_points_[j]);
      Vec2 v = velocity_.value(x.x(), x.y(), t);
      if (m.dim() == 1) v.y() = 0.0;
      out.cell[static_cast<std::size_t>(c) * nq + j] = v;
    }
  }
  for (int f = 0; f < m.n_facets(); ++f) {
    const Facet& facet = m.facet(f);
    for (int j = 0; j < nf; ++j) {
      const Vec2 x = facet_point(m, f, facet_params_[j]);
      const Vec2 v = velocity_.value(x.x(), x.y(), t);
      const double vn = m.dim() == 1 ? v.x() : v.dot(facet.normal);
      if (facet.exterior() && std::abs(vn) > kWallTolerance) {
        std::ostringstream os;
        os << "velocity has normal component " << vn << " on wall facet " << f << " at ("
           << x.x() << ", " << x.y() << "), t = " << t;
        fail(ErrorCode::WallFluxViolation, os.str());
      }
      out.facet_flux[static_cast<std::size_t>(f) * nf + j] = facet.exterior() ? 0.0 : vn;
    }
  }
}

const VelocitySamples& VelocitySampler::at(double t) {
  std::optional<int> phase;
  if (velocity_.phase) phase = velocity_.phase(t);
  for (Entry& e : cache_) {
    if (!e.valid) continue;
    if (velocity_.steady) return e.samples;
    if (phase && e.phase == phase) return e.samples;
    if (!phase && e.t == t) return e.samples;
  }
  Entry& e = cache_[next_];
  next_ = (next_ + 1) % static_cast<int>(cache_.size());
  fill(t, e.samples);
  e.valid = true;
  e.t = t;
  e.phase = phase;
  return e.samples;
}

}  // namespace rsadv

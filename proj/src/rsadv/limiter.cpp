#include "rsadv/limiter.hpp"

#include <algorithm>
#include <limits>

#include "rsadv/error.hpp"

namespace rsadv {

VertexLimiter::VertexLimiter(SpacePtr space) : space_(std::move(space)) {
  const FunctionSpace& s = *space_;
  for (int k = 0; k < s.n_components(); ++k) {
    const ComponentSpec& c = s.component(k);
    const bool linear_x = c.fx == Family::DG1;
    const bool linear_z = s.mesh().dim() == 1 ? c.fz == Family::None : c.fz == Family::DG1;
    if (!linear_x || !linear_z)
      fail(ErrorCode::SpaceMismatch,
           std::string("vertex limiter needs a fully discontinuous linear space, got ") +
               to_string(s.tag()));
  }
  qmin_.resize(s.n_components());
  qmax_.resize(s.n_components());
}

void VertexLimiter::apply(Eigen::VectorXd& q) const {
  const FunctionSpace& s = *space_;
  const Mesh& m = s.mesh();
  const int nc = m.n_cells();
  const int nv = m.n_vertices();
  means_.resize(nc);
  for (int k = 0; k < s.n_components(); ++k) {
    for (int c = 0; c < nc; ++c) {
      double sum = 0.0;
      const auto dofs = s.dof_map(c, k);
      for (int d : dofs) sum += q[d];
      means_[c] = sum / static_cast<double>(dofs.size());
    }
    auto& lo = qmin_[k];
    auto& hi = qmax_[k];
    lo.assign(nv, std::numeric_limits<double>::infinity());
    hi.assign(nv, -std::numeric_limits<double>::infinity());
    for (int v = 0; v < nv; ++v) {
      for (int c : m.vertex_cells(v)) {
        lo[v] = std::min(lo[v], means_[c]);
        hi[v] = std::max(hi[v], means_[c]);
      }
    }
    for (int c = 0; c < nc; ++c) {
      const auto dofs = s.dof_map(c, k);
      const auto verts = m.cell_vertices(c);
      const double mean = means_[c];
      double alpha = 1.0;
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        const double diff = q[dofs[i]] - mean;
        double r = 1.0;
        if (diff > 0.0)
          r = (hi[verts[i]] - mean) / diff;
        else if (diff < 0.0)
          r = (lo[verts[i]] - mean) / diff;
        alpha = std::min(alpha, std::clamp(r, 0.0, 1.0));
      }
      if (alpha < 1.0)
        for (int d : dofs) q[d] = mean + alpha * (q[d] - mean);
    }
  }
}

Field VertexLimiter::apply(const Field& f) const {
  if (f.space->tag() != space_->tag()) fail(ErrorCode::SpaceMismatch, "limiter space mismatch");
  Field out = f;
  apply(out.coeffs);
  return out;
}

}  // namespace rsadv

#include "rsadv/scheme.hpp"

#include <cmath>
#include <sstream>

#include "rsadv/error.hpp"

namespace rsadv {

SchemeConfig config_rho() {
  using T = SpaceTag;
  return {"rho", {T::DG0xDG0, T::DG1xDG1, T::CG1xCG1, T::DG0xDG0}, Projection::A, false, true};
}

SchemeConfig config_velocity() {
  using T = SpaceTag;
  return {"v", {T::RT0, T::VectorDG1xDG1, T::VectorCG1xCG1, T::BrokenRT0}, Projection::A, false, true};
}

SchemeConfig config_theta() {
  using T = SpaceTag;
  return {"theta", {T::DG0xCG1, T::DG1xDG1, T::CG1xCG1, T::DG0xDG1}, Projection::A, false, true};
}

SchemeConfig config_moisture() {
  SchemeConfig c = config_theta();
  c.name = "r";
  c.projection = Projection::B;
  c.limiter_enabled = true;
  return c;
}

SchemeConfig config_case_a() {
  using T = SpaceTag;
  return {"A", {T::DG0, T::DG1, T::CG1, T::DG0}, Projection::A, false, false};
}

SchemeConfig config_case_b() {
  using T = SpaceTag;
  return {"B", {T::CG1, T::DG1, T::CG1, T::DG1}, Projection::A, false, false};
}

SchemeConfig config_case_c() {
  SchemeConfig c = config_case_b();
  c.name = "C";
  c.projection = Projection::B;
  return c;
}

std::optional<SchemeConfig> config_by_name(std::string_view name) {
  if (name == "rho") return config_rho();
  if (name == "v") return config_velocity();
  if (name == "theta") return config_theta();
  if (name == "r") return config_moisture();
  if (name == "A") return config_case_a();
  if (name == "B") return config_case_b();
  if (name == "C") return config_case_c();
  return std::nullopt;
}

RecoveredScheme::RecoveredScheme(MeshPtr mesh, SchemeConfig config, VelocityField velocity, int substeps)
    : config_(std::move(config)),
      ops_(mesh, config_.spaces, config_.projection, config_.boundary_recovery),
      advection_(ops_.v1()),
      sampler_(mesh, std::move(velocity)),
      substeps_(substeps) {
  if (substeps_ < 1) fail(ErrorCode::InvalidArgument, "substeps must be positive");
  if (config_.limiter_enabled) limiter_ = std::make_unique<VertexLimiter>(ops_.v1());
}

Field RecoveredScheme::step(const Field& rho, double t, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "time step must be positive");
  Field q = ops_.apply_j(rho);
  const double h = dt / substeps_;
  for (int s = 0; s < substeps_; ++s)
    advection_.ssprk3_step(q.coeffs, sampler_, t + s * h, h, limiter_.get());
  return ops_.project(q);
}

int step_count(double dt, double t_final) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) fail(ErrorCode::InvalidArgument, "need dt > 0 and t_final >= 0");
  const double n = std::round(t_final / dt);
  if (std::abs(n * dt - t_final) > 1e-9 * std::max(1.0, t_final)) {
    std::ostringstream os;
    os << "t_final " << t_final << " is not a multiple of dt " << dt;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  return static_cast<int>(n);
}

Field RecoveredScheme::run(const Field& rho0, double dt, double t_final) {
  const int n = step_count(dt, t_final);
  Field rho = rho0;
  for (int i = 0; i < n; ++i) rho = step(rho, i * dt, dt);
  return rho;
}

Field recovered_step(const Field& rho, const TransportProblem& problem, double t) {
  RecoveredScheme scheme(rho.space->mesh_ptr(), problem.scheme, problem.velocity, problem.substeps);
  return scheme.step(rho, t, problem.dt);
}

double courant_number(const VelocityField& v, const Mesh& mesh, double dt, double t) {
  double c = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const Vec2 x = mesh.to_physical(cell, {0.5, 0.5});
    const Vec2 u = v.value(x.x(), x.y(), t);
    double local = std::abs(u.x()) * dt / mesh.dx();
    if (mesh.dim() == 2) local += std::abs(u.y()) * dt / mesh.dz();
    c = std::max(c, local);
  }
  return c;
}

}  // namespace rsadv

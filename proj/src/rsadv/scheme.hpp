#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rsadv/advection.hpp"
#include "rsadv/limiter.hpp"
#include "rsadv/recovery.hpp"
#include "rsadv/velocity.hpp"

namespace rsadv {

struct SchemeConfig {
  std::string name;
  Quadruple spaces;
  Projection projection = Projection::A;
  bool limiter_enabled = false;
  bool boundary_recovery = true;
};

/// Density: DG0 x DG0 with P_A.
SchemeConfig config_rho();
/// Velocity: RT0 with P_A.
SchemeConfig config_velocity();
/// Potential temperature: DG0 x CG1 with P_A.
SchemeConfig config_theta();
/// Moisture: temperature spaces with P_B and the vertex limiter.
SchemeConfig config_moisture();
/// 1D stability cases: A (DG0, P_A), B (CG1, P_A), C (CG1, P_B).
SchemeConfig config_case_a();
SchemeConfig config_case_b();
SchemeConfig config_case_c();

/// Lookup by short name: rho, v, theta, r, A, B, C.
std::optional<SchemeConfig> config_by_name(std::string_view name);

struct TransportProblem {
  VelocityField velocity;
  double dt = 0.0;
  double t_final = 0.0;
  SchemeConfig scheme;
  int substeps = 1;
};

/// rho -> P A^s I (R - P-hat R + 1) rho, with A the SSPRK3 advection step
/// repeated over `substeps` equal sub-intervals.
class RecoveredScheme {
 public:
  RecoveredScheme(MeshPtr mesh, SchemeConfig config, VelocityField velocity, int substeps = 1);

  Field step(const Field& rho, double t, double dt);
  /// Advances from t = 0 to t_final in steps of dt.
  Field run(const Field& rho0, double dt, double t_final);

  const SchemeOperators& operators() const { return ops_; }
  const AdvectionOperator& advection() const { return advection_; }
  const VertexLimiter* limiter() const { return limiter_.get(); }
  VelocitySampler& sampler() { return sampler_; }
  const SchemeConfig& config() const { return config_; }
  const SpacePtr& v0() const { return ops_.v0(); }

 private:
  SchemeConfig config_;
  SchemeOperators ops_;
  AdvectionOperator advection_;
  std::unique_ptr<VertexLimiter> limiter_;
  VelocitySampler sampler_;
  int substeps_;
};

/// Number of steps of size dt covering t_final; fails unless t_final is an
/// integer multiple of dt to 1e-9 relative.
int step_count(double dt, double t_final);

Field recovered_step(const Field& rho, const TransportProblem& problem, double t);

/// max over cells of |vx| dt / dx + |vz| dt / dz at cell centres.
double courant_number(const VelocityField& v, const Mesh& mesh, double dt, double t);

}  // namespace rsadv

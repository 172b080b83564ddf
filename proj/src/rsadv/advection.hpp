#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rsadv/limiter.hpp"
#include "rsadv/spaces.hpp"
#include "rsadv/velocity.hpp"

namespace rsadv {

/// Upwind discontinuous Galerkin discretisation of the advective equation
/// dq/dt + v . grad q = 0 on a fully discontinuous (bi)linear space, with
/// forward Euler increments and three-stage SSP Runge-Kutta steps.
class AdvectionOperator {
 public:
  explicit AdvectionOperator(SpacePtr space);

  const SpacePtr& space() const { return space_; }

  /// dt-scaled increment: the Euler step is q + increment.
  Eigen::VectorXd euler_increment(const Eigen::VectorXd& q, const VelocitySamples& v,
                                  double dt) const;
  Field euler_increment(const Field& q, VelocitySampler& sampler, double t, double dt) const;

  /// One SSPRK3 step. The limiter, when given, is applied before the step
  /// and after each stage. Stages sample the velocity at t, t + dt and
  /// t + dt / 2.
  void ssprk3_step(Eigen::VectorXd& q, VelocitySampler& sampler, double t, double dt,
                   const VertexLimiter* limiter = nullptr) const;
  Field ssprk3_step(const Field& q, VelocitySampler& sampler, double t, double dt,
                    const VertexLimiter* limiter = nullptr) const;

 private:
  SpacePtr space_;
  int nloc_ = 0;
  int nfp_ = 0;
  Eigen::MatrixXd inv_mass_;                 // reference local mass inverse
  std::vector<double> cell_phi_;             // [point][i]
  std::vector<double> cell_gx_, cell_gz_;    // physical gradients [point][i]
  std::vector<double> trace_;                // [local facet][point][i]
  std::vector<double> cell_w_;
  std::vector<double> facet_w_;
  mutable Eigen::VectorXd stage_, work_;
};

}  // namespace rsadv

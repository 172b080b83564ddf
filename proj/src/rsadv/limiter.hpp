#pragma once

#include <vector>

#include "rsadv/spaces.hpp"

namespace rsadv {

/// Vertex-based slope limiter for fully discontinuous (bi)linear fields.
/// Each element's deviation from its mean is scaled by the largest factor
/// in [0, 1] that keeps the nodal values within the range of cell means
/// over the cells sharing each vertex.
class VertexLimiter {
 public:
  explicit VertexLimiter(SpacePtr space);

  void apply(Eigen::VectorXd& coeffs) const;
  Field apply(const Field& f) const;

  /// Per-vertex bounds of the most recent application for component k.
  const std::vector<double>& last_min(int k = 0) const { return qmin_[k]; }
  const std::vector<double>& last_max(int k = 0) const { return qmax_[k]; }

 private:
  SpacePtr space_;
  mutable std::vector<std::vector<double>> qmin_;
  mutable std::vector<std::vector<double>> qmax_;
  mutable std::vector<double> means_;
};

}  // namespace rsadv

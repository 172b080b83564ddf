#pragma once

#include <vector>

#include "rsadv/mesh.hpp"

namespace rsadv {

/// Gauss-Legendre rule on [0, 1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule1D gauss_legendre(int n_points);

/// Tensor Gauss rule on the reference cell. In 1D the t-coordinate is fixed
/// at 0.5 with unit weight.
struct CellQuadrature {
  std::vector<RefPoint> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

CellQuadrature cell_quadrature(int dim, int points_per_direction);

}  // namespace rsadv

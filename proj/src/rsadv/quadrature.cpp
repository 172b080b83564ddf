#include "rsadv/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "rsadv/error.hpp"

namespace rsadv {

GaussRule1D gauss_legendre(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "Gauss rule needs at least one point");
  GaussRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev initial guess, then map
  // [-1, 1] -> [0, 1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

CellQuadrature cell_quadrature(int dim, int n) {
  const GaussRule1D g = gauss_legendre(n);
  CellQuadrature q;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      q.points.push_back({g.points[i], 0.5});
      q.weights.push_back(g.weights[i]);
    }
    return q;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      q.points.push_back({g.points[i], g.points[j]});
      q.weights.push_back(g.weights[i] * g.weights[j]);
    }
  }
  return q;
}

}  // namespace rsadv

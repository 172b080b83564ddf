#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "rsadv/mesh.hpp"

namespace rsadv {

/// Prescribed advecting velocity v(x, z, t). `steady` fields are sampled
/// once; a `phase` function marks piecewise-steady fields whose samples can
/// be reused while the phase value is unchanged.
struct VelocityField {
  std::function<Vec2(double x, double z, double t)> value;
  bool steady = false;
  std::function<int(double t)> phase;
};

VelocityField constant_velocity(Vec2 v);
VelocityField zero_velocity();

/// Velocity samples at the volume and facet quadrature points of a mesh.
/// Volume points follow the cell quadrature order; facet samples hold
/// v . n for the facet's stored normal.
struct VelocitySamples {
  int points_per_cell = 0;
  int points_per_facet = 0;
  std::vector<Vec2> cell;
  std::vector<double> facet_flux;
};

class VelocitySampler {
 public:
  static constexpr double kWallTolerance = 1e-12;

  VelocitySampler(MeshPtr mesh, VelocityField velocity);

  /// Samples at time t; throws a wall-flux error if v . n on a wall facet
  /// exceeds the tolerance.
  const VelocitySamples& at(double t);
  const VelocityField& velocity() const { return velocity_; }
  const Mesh& mesh() const { return *mesh_; }

  /// Reference-cell volume points and facet parameters used for sampling.
  const std::vector<RefPoint>& cell_points() const { return cell_points_; }
  const std::vector<double>& cell_weights() const { return cell_weights_; }
  const std::vector<double>& facet_params() const { return facet_params_; }
  const std::vector<double>& facet_weights() const { return facet_weights_; }

 private:
  struct Entry {
    bool valid = false;
    double t = 0.0;
    std::optional<int> phase;
    VelocitySamples samples;
  };

  void fill(double t, VelocitySamples& out) const;

  MeshPtr mesh_;
  VelocityField velocity_;
  std::vector<RefPoint> cell_points_;
  std::vector<double> cell_weights_;
  std::vector<double> facet_params_;
  std::vector<double> facet_weights_;
  std::array<Entry, 3> cache_;
  int next_ = 0;
};

/// Physical location of point j on facet f.
Vec2 facet_point(const Mesh& mesh, int facet, double param);

}  // namespace rsadv

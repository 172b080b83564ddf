#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rsadv {

using Vec2 = Eigen::Vector2d;

/// Point in the reference cell [0,1]^d. In 1D only `s` is meaningful.
struct RefPoint {
  double s = 0.5;
  double t = 0.5;
};

/// A facet of the structured mesh. Interior facets join `cells[0]` to
/// `cells[1]` and `normal` points from the first to the second. Exterior
/// facets have `cells[1] == -1` and an outward normal.
struct Facet {
  std::array<int, 2> cells{-1, -1};
  int axis = 0;  // 0: normal along x, 1: normal along z
  Vec2 normal = Vec2::UnitX();
  bool exterior() const { return cells[1] < 0; }
};

/// Local side of a facet as seen by one of its cells: `side == 0` means the
/// cell is `cells[0]` of the facet.
struct CellFacet {
  int facet = -1;
  int side = 0;
};

enum class FacetGroup { InteriorX, InteriorZ, Boundary };

/// Uniform structured mesh. In 1D (a periodic interval) there is a single
/// row of cells and no z-direction; in 2D the mesh is a vertical slice with
/// rigid walls at z = 0 and z = lz, periodic in x unless requested otherwise.
///
/// Cells are numbered row-major: cell = iz * nx + ix. Cell-local vertex
/// order is (left, right) in 1D and (bottom-left, bottom-right, top-left,
/// top-right) in 2D. Cell-local facet order is (west, east) in 1D and
/// (west, east, south, north) in 2D.
class Mesh {
 public:
  int dim() const { return dim_; }
  int nx() const { return nx_; }
  int nz() const { return nz_; }
  double lx() const { return lx_; }
  double lz() const { return lz_; }
  double dx() const { return lx_ / nx_; }
  /// Vertical spacing; 1 in 1D so that cell measures reduce to dx.
  double dz() const { return dim_ == 1 ? 1.0 : lz_ / nz_; }
  bool periodic_x() const { return periodic_x_; }

  int n_cells() const { return nx_ * nz_; }
  int cell_index(int ix, int iz) const { return iz * nx_ + ix; }
  int cell_ix(int cell) const { return cell % nx_; }
  int cell_iz(int cell) const { return cell / nx_; }
  double cell_measure() const { return dim_ == 1 ? dx() : dx() * dz(); }
  /// Length of a facet with the given normal axis (1 for 1D point facets).
  double facet_measure(int axis) const;

  Vec2 cell_origin(int cell) const;
  Vec2 to_physical(int cell, RefPoint p) const;

  int n_vertices() const { return static_cast<int>(vertex_cell_offsets_.size()) - 1; }
  int vertices_per_cell() const { return dim_ == 1 ? 2 : 4; }
  std::span<const int> cell_vertices(int cell) const;
  std::span<const int> vertex_cells(int vertex) const;
  int valence(int vertex) const { return static_cast<int>(vertex_cells(vertex).size()); }
  Vec2 vertex_coords(int vertex) const;

  int n_facets() const { return static_cast<int>(facets_.size()); }
  const Facet& facet(int f) const { return facets_[f]; }
  std::span<const Facet> facets() const { return facets_; }
  int facets_per_cell() const { return dim_ == 1 ? 2 : 4; }
  std::span<const CellFacet> cell_facets(int cell) const;
  FacetGroup facet_group(int f) const;
  bool has_exterior_facets() const;

  bool operator==(const Mesh& other) const;

 private:
  friend Mesh build_interval(int n_cells, double length);
  friend Mesh build_quad(int nx, int nz, double lx, double lz, bool periodic_x);

  Mesh() = default;
  void build_vertex_cells();

  int dim_ = 1;
  int nx_ = 0;
  int nz_ = 1;
  double lx_ = 0.0;
  double lz_ = 0.0;
  bool periodic_x_ = true;
  int nvx_ = 0;

  std::vector<int> cell_vertices_;
  std::vector<int> vertex_cell_offsets_;
  std::vector<int> vertex_cells_;
  std::vector<Facet> facets_;
  std::vector<CellFacet> cell_facets_;
};

/// Periodic interval of `n_cells` cells (n_cells >= 2, length > 0).
Mesh build_interval(int n_cells, double length);

/// Vertical-slice rectangle with nx, nz >= 2 cells and rigid walls at top and
/// bottom.
Mesh build_quad(int nx, int nz, double lx, double lz, bool periodic_x);

using MeshPtr = std::shared_ptr<const Mesh>;

inline MeshPtr make_interval(int n_cells, double length) {
  return std::make_shared<const Mesh>(build_interval(n_cells, length));
}

inline MeshPtr make_quad(int nx, int nz, double lx, double lz, bool periodic_x) {
  return std::make_shared<const Mesh>(build_quad(nx, nz, lx, lz, periodic_x));
}

}  // namespace rsadv

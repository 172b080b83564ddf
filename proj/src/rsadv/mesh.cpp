#include "rsadv/mesh.hpp"

#include <sstream>

#include "rsadv/error.hpp"

namespace rsadv {

double Mesh::facet_measure(int axis) const {
  if (dim_ == 1) return 1.0;
  return axis == 0 ? dz() : dx();
}

Vec2 Mesh::cell_origin(int cell) const {
  const double z = dim_ == 1 ? 0.0 : cell_iz(cell) * dz();
  return {cell_ix(cell) * dx(), z};
}

Vec2 Mesh::to_physical(int cell, RefPoint p) const {
  Vec2 x = cell_origin(cell);
  x.x() += p.s * dx();
  if (dim_ == 2) x.y() += p.t * dz();
  return x;
}

std::span<const int> Mesh::cell_vertices(int cell) const {
  const int n = vertices_per_cell();
  return {cell_vertices_.data() + static_cast<std::size_t>(cell) * n, static_cast<std::size_t>(n)};
}

std::span<const int> Mesh::vertex_cells(int vertex) const {
  const int b = vertex_cell_offsets_[vertex];
  const int e = vertex_cell_offsets_[vertex + 1];
  return {vertex_cells_.data() + b, static_cast<std::size_t>(e - b)};
}

Vec2 Mesh::vertex_coords(int vertex) const {
  const int ix = vertex % nvx_;
  const int iz = vertex / nvx_;
  return {ix * dx(), dim_ == 1 ? 0.0 : iz * dz()};
}

std::span<const CellFacet> Mesh::cell_facets(int cell) const {
  const int n = facets_per_cell();
  return {cell_facets_.data() + static_cast<std::size_t>(cell) * n, static_cast<std::size_t>(n)};
}

FacetGroup Mesh::facet_group(int f) const {
  const Facet& facet = facets_[f];
  if (facet.exterior()) return FacetGroup::Boundary;
  return facet.axis == 0 ? FacetGroup::InteriorX : FacetGroup::InteriorZ;
}

bool Mesh::has_exterior_facets() const {
  for (const Facet& f : facets_)
    if (f.exterior()) return true;
  return false;
}

bool Mesh::operator==(const Mesh& o) const {
  return dim_ == o.dim_ && nx_ == o.nx_ && nz_ == o.nz_ && lx_ == o.lx_ && lz_ == o.lz_ &&
         periodic_x_ == o.periodic_x_;
}

void Mesh::build_vertex_cells() {
  const int nv = nvx_ * (dim_ == 1 ? 1 : nz_ + 1);
  vertex_cell_offsets_.assign(nv + 1, 0);
  for (int v : cell_vertices_) ++vertex_cell_offsets_[v + 1];
  for (int v = 0; v < nv; ++v) vertex_cell_offsets_[v + 1] += vertex_cell_offsets_[v];
  vertex_cells_.assign(vertex_cell_offsets_.back(), -1);
  std::vector<int> fill(vertex_cell_offsets_.begin(), vertex_cell_offsets_.end() - 1);
  for (int c = 0; c < n_cells(); ++c)
    for (int v : cell_vertices(c)) vertex_cells_[fill[v]++] = c;
}

Mesh build_interval(int n_cells, double length) {
  if (n_cells < 2 || !(length > 0.0)) {
    std::ostringstream os;
    os << "interval mesh needs n_cells >= 2 and length > 0 (got " << n_cells << ", " << length << ")";
    fail(ErrorCode::InvalidDimension, os.str());
  }
  Mesh m;
  m.dim_ = 1;
  m.nx_ = n_cells;
  m.nz_ = 1;
  m.lx_ = length;
  m.lz_ = 0.0;
  m.periodic_x_ = true;
  m.nvx_ = n_cells;

  m.cell_vertices_.resize(2 * n_cells);
  m.facets_.resize(n_cells);
  m.cell_facets_.resize(2 * n_cells);
  for (int i = 0; i < n_cells; ++i) {
    m.cell_vertices_[2 * i] = i;
    m.cell_vertices_[2 * i + 1] = (i + 1) % n_cells;
    // Facet i sits at vertex i, between cells i-1 and i.
    Facet& f = m.facets_[i];
    f.cells = {(i - 1 + n_cells) % n_cells, i};
    f.axis = 0;
    f.normal = Vec2::UnitX();
    m.cell_facets_[2 * i] = {i, 1};
    m.cell_facets_[2 * i + 1] = {(i + 1) % n_cells, 0};
  }
  m.build_vertex_cells();
  return m;
}

Mesh build_quad(int nx, int nz, double lx, double lz, bool periodic_x) {
  if (nx < 2 || nz < 2 || !(lx > 0.0) || !(lz > 0.0)) {
    std::ostringstream os;
    os << "quad mesh needs nx, nz >= 2 and positive lengths (got " << nx << "x" << nz << ", " << lx
       << "x" << lz << ")";
    fail(ErrorCode::InvalidDimension, os.str());
  }
  Mesh m;
  m.dim_ = 2;
  m.nx_ = nx;
  m.nz_ = nz;
  m.lx_ = lx;
  m.lz_ = lz;
  m.periodic_x_ = periodic_x;
  m.nvx_ = periodic_x ? nx : nx + 1;
  const int nvx = m.nvx_;

  m.cell_vertices_.resize(4 * static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      const int c = m.cell_index(ix, iz);
      const int ixr = periodic_x ? (ix + 1) % nx : ix + 1;
      int* v = &m.cell_vertices_[4 * static_cast<std::size_t>(c)];
      v[0] = iz * nvx + ix;
      v[1] = iz * nvx + ixr;
      v[2] = (iz + 1) * nvx + ix;
      v[3] = (iz + 1) * nvx + ixr;
    }
  }

  // x-normal facets: column ix in [0, nvx), row iz in [0, nz).
  const int n_xfacets = nvx * nz;
  const int n_zfacets = nx * (nz + 1);
  m.facets_.resize(n_xfacets + n_zfacets);
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nvx; ++ix) {
      Facet& f = m.facets_[iz * nvx + ix];
      f.axis = 0;
      if (periodic_x) {
        f.cells = {m.cell_index((ix - 1 + nx) % nx, iz), m.cell_index(ix, iz)};
        f.normal = Vec2::UnitX();
      } else if (ix == 0) {
        f.cells = {m.cell_index(0, iz), -1};
        f.normal = -Vec2::UnitX();
      } else if (ix == nx) {
        f.cells = {m.cell_index(nx - 1, iz), -1};
        f.normal = Vec2::UnitX();
      } else {
        f.cells = {m.cell_index(ix - 1, iz), m.cell_index(ix, iz)};
        f.normal = Vec2::UnitX();
      }
    }
  }
  // z-normal facets: row iz in [0, nz], column ix in [0, nx).
  for (int iz = 0; iz <= nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      Facet& f = m.facets_[n_xfacets + iz * nx + ix];
      f.axis = 1;
      if (iz == 0) {
        f.cells = {m.cell_index(ix, 0), -1};
        f.normal = -Vec2::UnitY();
      } else if (iz == nz) {
        f.cells = {m.cell_index(ix, nz - 1), -1};
        f.normal = Vec2::UnitY();
      } else {
        f.cells = {m.cell_index(ix, iz - 1), m.cell_index(ix, iz)};
        f.normal = Vec2::UnitY();
      }
    }
  }

  m.cell_facets_.resize(4 * static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      const int c = m.cell_index(ix, iz);
      CellFacet* cf = &m.cell_facets_[4 * static_cast<std::size_t>(c)];
      const int west = iz * nvx + ix;
      const int east = iz * nvx + (periodic_x ? (ix + 1) % nx : ix + 1);
      const int south = n_xfacets + iz * nx + ix;
      const int north = n_xfacets + (iz + 1) * nx + ix;
      cf[0] = {west, m.facets_[west].exterior() ? 0 : 1};
      cf[1] = {east, 0};
      cf[2] = {south, m.facets_[south].exterior() ? 0 : 1};
      cf[3] = {north, 0};
    }
  }
  m.build_vertex_cells();
  return m;
}

}  // namespace rsadv

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsadv/error.hpp"
#include "rsadv/mesh.hpp"

using namespace rsadv;

TEST_CASE("interval of 120 unit cells") {
  const Mesh m = build_interval(120, 120.0);
  CHECK(m.dim() == 1);
  CHECK(m.n_cells() == 120);
  CHECK(m.dx() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.n_vertices() == 120);
  CHECK(m.n_facets() == 120);
}

TEST_CASE("two-cell interval shares both vertices") {
  const Mesh m = build_interval(2, 1.0);
  for (int v = 0; v < m.n_vertices(); ++v) {
    auto cells = m.vertex_cells(v);
    std::vector<int> c(cells.begin(), cells.end());
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<int>{0, 1});
  }
}

TEST_CASE("interval adjacency wraps around") {
  const Mesh m = build_interval(4, 2.0);
  CHECK(m.dx() == 0.5);
  auto cells = m.vertex_cells(0);
  std::vector<int> c(cells.begin(), cells.end());
  std::sort(c.begin(), c.end());
  CHECK(c == std::vector<int>{0, 3});
  for (int i = 0; i < 4; ++i) {
    CHECK(m.cell_vertices(i)[0] == i);
    CHECK(m.cell_vertices(i)[1] == (i + 1) % 4);
  }
}

TEST_CASE("quad of spacing 0.01") {
  const Mesh m = build_quad(100, 100, 1.0, 1.0, true);
  CHECK(m.dx() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m.dz() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(m.n_cells() == 10000);
}

TEST_CASE("2x2 periodic quad valence") {
  const Mesh m = build_quad(2, 2, 1.0, 1.0, true);
  CHECK(m.n_cells() == 4);
  CHECK(m.n_vertices() == 6);
  for (int v = 0; v < m.n_vertices(); ++v) {
    const double z = m.vertex_coords(v).y();
    const bool wall = z == 0.0 || z == 1.0;
    CHECK(m.valence(v) == (wall ? 2 : 4));
  }
}

TEST_CASE("non-periodic corners have valence 1") {
  const Mesh m = build_quad(3, 2, 3.0, 2.0, false);
  CHECK(m.n_vertices() == 12);
  int corners = 0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    const Vec2 p = m.vertex_coords(v);
    const bool cx = p.x() == 0.0 || p.x() == 3.0;
    const bool cz = p.y() == 0.0 || p.y() == 2.0;
    if (cx && cz) {
      ++corners;
      CHECK(m.valence(v) == 1);
    }
  }
  CHECK(corners == 4);
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(build_interval(1, 1.0), Error);
  CHECK_THROWS_AS(build_interval(4, 0.0), Error);
  CHECK_THROWS_AS(build_quad(1, 4, 1.0, 1.0, true), Error);
  CHECK_THROWS_AS(build_quad(4, 4, -1.0, 1.0, true), Error);
  try {
    build_interval(0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDimension);
  }
}

TEST_CASE("cell areas sum to the domain area") {
  for (const bool periodic : {true, false}) {
    const Mesh m = build_quad(7, 5, 1.3, 0.7, periodic);
    double area = 0.0;
    for (int c = 0; c < m.n_cells(); ++c) area += m.cell_measure();
    CHECK(std::abs(area - 1.3 * 0.7) <= 1e-14 * 1.3 * 0.7);
  }
}

TEST_CASE("interior facets are listed once by each neighbour with opposite sides") {
  for (const bool periodic : {true, false}) {
    const Mesh m = build_quad(5, 4, 1.0, 1.0, periodic);
    std::vector<int> seen(m.n_facets() * 2, 0);
    for (int c = 0; c < m.n_cells(); ++c) {
      for (const CellFacet& cf : m.cell_facets(c)) {
        const Facet& f = m.facet(cf.facet);
        CHECK(f.cells[cf.side] == c);
        ++seen[2 * cf.facet + cf.side];
      }
    }
    for (int f = 0; f < m.n_facets(); ++f) {
      CHECK(seen[2 * f] == 1);
      CHECK(seen[2 * f + 1] == (m.facet(f).exterior() ? 0 : 1));
      CHECK(m.facet(f).normal.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("exterior facets only on the walls of a periodic slice") {
  const Mesh m = build_quad(6, 3, 1.0, 1.0, true);
  int exterior = 0;
  for (int f = 0; f < m.n_facets(); ++f) {
    if (!m.facet(f).exterior()) continue;
    ++exterior;
    CHECK(m.facet(f).axis == 1);
    const int c = m.facet(f).cells[0];
    const int iz = m.cell_iz(c);
    CHECK((iz == 0 || iz == 2));
    CHECK(m.facet(f).normal.y() == (iz == 0 ? -1.0 : 1.0));
  }
  CHECK(exterior == 12);
}

TEST_CASE("vertex and cell maps round-trip") {
  const Mesh m = build_quad(4, 3, 1.0, 1.0, false);
  for (int v = 0; v < m.n_vertices(); ++v) {
    for (const int c : m.vertex_cells(v)) {
      auto verts = m.cell_vertices(c);
      CHECK(std::count(verts.begin(), verts.end(), v) == 1);
    }
  }
  for (int c = 0; c < m.n_cells(); ++c) {
    for (const int v : m.cell_vertices(c)) {
      auto cells = m.vertex_cells(v);
      CHECK(std::count(cells.begin(), cells.end(), c) == 1);
    }
  }
}

TEST_CASE("row-major cell numbering") {
  const Mesh m = build_quad(5, 3, 1.0, 1.0, true);
  CHECK(m.cell_index(2, 1) == 7);
  CHECK(m.cell_ix(7) == 2);
  CHECK(m.cell_iz(7) == 1);
  const Vec2 p = m.to_physical(7, {0.5, 0.5});
  CHECK(p.x() == doctest::Approx(0.5));
  CHECK(p.y() == doctest::Approx(0.5));
}

#include "rsadv/spaces.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "rsadv/error.hpp"
#include "rsadv/linalg.hpp"
#include "rsadv/quadrature.hpp"

namespace rsadv {

namespace {

struct TagInfo {
  SpaceTag tag;
  const char* name;
  int dim;
  std::vector<ComponentSpec> comps;
};

const std::vector<TagInfo>& tag_table() {
  using F = Family;
  static const std::vector<TagInfo> table = {
      {SpaceTag::DG0, "DG0", 1, {{F::DG0, F::None}}},
      {SpaceTag::CG1, "CG1", 1, {{F::CG1, F::None}}},
      {SpaceTag::DG1, "DG1", 1, {{F::DG1, F::None}}},
      {SpaceTag::DG0xDG0, "DG0xDG0", 2, {{F::DG0, F::DG0}}},
      {SpaceTag::DG0xCG1, "DG0xCG1", 2, {{F::DG0, F::CG1}}},
      {SpaceTag::DG1xDG1, "DG1xDG1", 2, {{F::DG1, F::DG1}}},
      {SpaceTag::CG1xCG1, "CG1xCG1", 2, {{F::CG1, F::CG1}}},
      {SpaceTag::DG0xDG1, "DG0xDG1", 2, {{F::DG0, F::DG1}}},
      {SpaceTag::RT0, "RT0", 2, {{F::CG1, F::DG0}, {F::DG0, F::CG1}}},
      {SpaceTag::BrokenRT0, "BrokenRT0", 2, {{F::DG1, F::DG0}, {F::DG0, F::DG1}}},
      {SpaceTag::VectorDG1xDG1, "VectorDG1xDG1", 2, {{F::DG1, F::DG1}, {F::DG1, F::DG1}}},
      {SpaceTag::VectorCG1xCG1, "VectorCG1xCG1", 2, {{F::CG1, F::CG1}, {F::CG1, F::CG1}}},
  };
  return table;
}

const TagInfo& info(SpaceTag tag) {
  for (const TagInfo& t : tag_table())
    if (t.tag == tag) return t;
  fail(ErrorCode::InvalidArgument, "unknown space tag");
}

// 1D basis on [0, 1] for a family.
void basis_1d(Family f, double s, double* v, double* d) {
  if (f == Family::DG1 || f == Family::CG1) {
    v[0] = 1.0 - s;
    v[1] = s;
    d[0] = -1.0;
    d[1] = 1.0;
  } else {
    v[0] = 1.0;
    d[0] = 0.0;
  }
}

double ref_node(Family f, int a) {
  if (f == Family::DG1 || f == Family::CG1) return a == 0 ? 0.0 : 1.0;
  return 0.5;
}

// Per-direction global index and count for continuous numbering.
int direction_count(Family f, int n_cells, bool periodic) {
  switch (f) {
    case Family::None: return 1;
    case Family::DG0: return n_cells;
    case Family::DG1: return 2 * n_cells;
    case Family::CG1: return periodic ? n_cells : n_cells + 1;
  }
  return 1;
}

int direction_index(Family f, int i, int a, int n_cells, bool periodic) {
  switch (f) {
    case Family::None: return 0;
    case Family::DG0: return i;
    case Family::DG1: return 2 * i + a;
    case Family::CG1: return periodic ? (i + a) % n_cells : i + a;
  }
  return 0;
}

}  // namespace

const char* to_string(SpaceTag tag) noexcept {
  for (const TagInfo& t : tag_table())
    if (t.tag == tag) return t.name;
  return "unknown";
}

std::optional<SpaceTag> parse_space_tag(std::string_view name) {
  for (const TagInfo& t : tag_table())
    if (name == t.name) return t.tag;
  return std::nullopt;
}

int tag_dimension(SpaceTag tag) { return info(tag).dim; }

std::vector<ComponentSpec> tag_components(SpaceTag tag) { return info(tag).comps; }

int family_size(Family f) { return (f == Family::DG1 || f == Family::CG1) ? 2 : 1; }

int family_degree(Family f) { return (f == Family::DG1 || f == Family::CG1) ? 1 : 0; }

FunctionSpace::FunctionSpace(MeshPtr mesh, SpaceTag tag) : mesh_(std::move(mesh)), tag_(tag) {
  if (!mesh_) fail(ErrorCode::InvalidArgument, "function space needs a mesh");
  const TagInfo& ti = info(tag);
  if (ti.dim != mesh_->dim()) {
    std::ostringstream os;
    os << "space " << ti.name << " is " << ti.dim << "D but the mesh is " << mesh_->dim() << "D";
    fail(ErrorCode::InvalidDimension, os.str());
  }
  components_ = ti.comps;
  const Mesh& m = *mesh_;
  const int nc = m.n_cells();
  const int ncomp = n_components();

  offsets_.assign(ncomp + 1, 0);
  local_offsets_.assign(ncomp + 1, 0);
  for (int k = 0; k < ncomp; ++k) {
    const ComponentSpec& c = components_[k];
    nlx_.push_back(family_size(c.fx));
    nlz_.push_back(family_size(c.fz));
    local_offsets_[k + 1] = local_offsets_[k] + nlx_[k] * nlz_[k];
    const bool broken = c.fx != Family::CG1 && c.fz != Family::CG1;
    if (!broken) fully_broken_ = false;
    int size;
    if (broken) {
      size = nc * nlx_[k] * nlz_[k];
    } else {
      size = direction_count(c.fx, m.nx(), m.periodic_x()) *
             direction_count(c.fz, m.nz(), false);
    }
    offsets_[k + 1] = offsets_[k] + size;
  }

  const int nloc = local_offsets_.back();
  dofs_.resize(static_cast<std::size_t>(nc) * nloc);
  dof_coords_.assign(n_dofs(), Vec2::Zero());
  std::vector<char> seen(n_dofs(), 0);
  for (int cell = 0; cell < nc; ++cell) {
    const int ix = m.cell_ix(cell);
    const int iz = m.cell_iz(cell);
    for (int k = 0; k < ncomp; ++k) {
      const ComponentSpec& c = components_[k];
      const bool broken = c.fx != Family::CG1 && c.fz != Family::CG1;
      const int nx_dir = direction_count(c.fx, m.nx(), m.periodic_x());
      for (int b = 0; b < nlz_[k]; ++b) {
        for (int a = 0; a < nlx_[k]; ++a) {
          const int l = a + nlx_[k] * b;
          int g;
          if (broken) {
            g = cell * local_size(k) + l;
          } else {
            const int jx = direction_index(c.fx, ix, a, m.nx(), m.periodic_x());
            const int jz = direction_index(c.fz, iz, b, m.nz(), false);
            g = jz * nx_dir + jx;
          }
          g += offsets_[k];
          dofs_[static_cast<std::size_t>(cell) * nloc + local_offsets_[k] + l] = g;
          if (!seen[g]) {
            seen[g] = 1;
            dof_coords_[g] = m.to_physical(cell, local_point(k, l));
          }
        }
      }
    }
  }
}

std::span<const int> FunctionSpace::dof_map(int cell, int k) const {
  const std::size_t base = static_cast<std::size_t>(cell) * local_offsets_.back() + local_offsets_[k];
  return {dofs_.data() + base, static_cast<std::size_t>(local_size(k))};
}

std::vector<int> FunctionSpace::cell_dofs(int cell) const {
  const std::size_t n = local_offsets_.back();
  const int* p = dofs_.data() + static_cast<std::size_t>(cell) * n;
  return {p, p + n};
}

RefPoint FunctionSpace::local_point(int k, int l) const {
  const int a = l % nlx_[k];
  const int b = l / nlx_[k];
  return {ref_node(components_[k].fx, a), ref_node(components_[k].fz, b)};
}

int FunctionSpace::dof_component(int dof) const {
  for (int k = 0; k < n_components(); ++k)
    if (dof < offsets_[k + 1]) return k;
  return n_components() - 1;
}

int FunctionSpace::degree(int k, int axis) const {
  const ComponentSpec& c = components_[k];
  return family_degree(axis == 0 ? c.fx : c.fz);
}

void FunctionSpace::basis(int k, RefPoint p, double* out) const {
  double vx[2], dx[2], vz[2], dz[2];
  basis_1d(components_[k].fx, p.s, vx, dx);
  basis_1d(components_[k].fz, p.t, vz, dz);
  for (int b = 0; b < nlz_[k]; ++b)
    for (int a = 0; a < nlx_[k]; ++a) out[a + nlx_[k] * b] = vx[a] * vz[b];
}

void FunctionSpace::basis_grad(int k, RefPoint p, double* gx, double* gz) const {
  double vx[2], dx[2], vz[2], dz[2];
  basis_1d(components_[k].fx, p.s, vx, dx);
  basis_1d(components_[k].fz, p.t, vz, dz);
  const double hx = mesh_->dx();
  const double hz = mesh_->dz();
  for (int b = 0; b < nlz_[k]; ++b) {
    for (int a = 0; a < nlx_[k]; ++a) {
      gx[a + nlx_[k] * b] = dx[a] * vz[b] / hx;
      gz[a + nlx_[k] * b] = mesh_->dim() == 1 ? 0.0 : vx[a] * dz[b] / hz;
    }
  }
}

Field::Field(SpacePtr s) : space(std::move(s)) {
  if (!space) fail(ErrorCode::InvalidArgument, "field needs a space");
  coeffs = Eigen::VectorXd::Zero(space->n_dofs());
}

Field::Field(SpacePtr s, Eigen::VectorXd c) : space(std::move(s)), coeffs(std::move(c)) {
  if (!space) fail(ErrorCode::InvalidArgument, "field needs a space");
  if (coeffs.size() != space->n_dofs()) {
    std::ostringstream os;
    os << "coefficient vector has length " << coeffs.size() << ", space " << to_string(space->tag())
       << " has " << space->n_dofs() << " DOFs";
    fail(ErrorCode::SpaceMismatch, os.str());
  }
}

double evaluate(const Field& f, int cell, RefPoint p, int component) {
  const FunctionSpace& s = *f.space;
  double phi[4];
  s.basis(component, p, phi);
  const auto dofs = s.dof_map(cell, component);
  double v = 0.0;
  for (std::size_t l = 0; l < dofs.size(); ++l) v += phi[l] * f.coeffs[dofs[l]];
  return v;
}

Vec2 evaluate_vector(const Field& f, int cell, RefPoint p) {
  if (f.space->n_components() != 2)
    fail(ErrorCode::SpaceMismatch, "evaluate_vector needs a vector space");
  return {evaluate(f, cell, p, 0), evaluate(f, cell, p, 1)};
}

Vec2 evaluate_gradient(const Field& f, int cell, RefPoint p, int component) {
  const FunctionSpace& s = *f.space;
  double gx[4], gz[4];
  s.basis_grad(component, p, gx, gz);
  const auto dofs = s.dof_map(cell, component);
  Vec2 g = Vec2::Zero();
  for (std::size_t l = 0; l < dofs.size(); ++l) {
    g.x() += gx[l] * f.coeffs[dofs[l]];
    g.y() += gz[l] * f.coeffs[dofs[l]];
  }
  return g;
}

namespace {

Field project_components(const std::function<double(double, double, int)>& f,
                         const SpacePtr& space, int quad_points) {
  const FunctionSpace& s = *space;
  const Mesh& m = s.mesh();
  const CellQuadrature q = cell_quadrature(m.dim(), quad_points);
  const double vol = m.cell_measure();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s.n_dofs());
  double phi[4];
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    for (int k = 0; k < s.n_components(); ++k) {
      const auto dofs = s.dof_map(cell, k);
      for (int iq = 0; iq < q.size(); ++iq) {
        const Vec2 x = m.to_physical(cell, q.points[iq]);
        const double w = q.weights[iq] * vol * f(x.x(), x.y(), k);
        s.basis(k, q.points[iq], phi);
        for (std::size_t l = 0; l < dofs.size(); ++l) rhs[dofs[l]] += w * phi[l];
      }
    }
  }
  MassSolver solver(mass_matrix(s));
  return Field(space, solver.solve(rhs));
}

}  // namespace

Field project_analytic(const ScalarFunction& f, const SpacePtr& space, int quad_points) {
  return project_components([&](double x, double z, int) { return f(x, z); }, space, quad_points);
}

Field project_analytic(const VectorFunction& f, const SpacePtr& space, int quad_points) {
  if (space->n_components() != 2)
    fail(ErrorCode::SpaceMismatch, "vector projection needs a vector space");
  return project_components([&](double x, double z, int k) { return f(x, z)[k]; }, space,
                            quad_points);
}

Field interpolate_analytic(const ScalarFunction& f, const SpacePtr& space) {
  Field out(space);
  for (int i = 0; i < space->n_dofs(); ++i) {
    const Vec2 x = space->dof_coords(i);
    out.coeffs[i] = f(x.x(), x.y());
  }
  return out;
}

Field interpolate_analytic(const VectorFunction& f, const SpacePtr& space) {
  if (space->n_components() != 2)
    fail(ErrorCode::SpaceMismatch, "vector interpolation needs a vector space");
  Field out(space);
  for (int i = 0; i < space->n_dofs(); ++i) {
    const Vec2 x = space->dof_coords(i);
    out.coeffs[i] = f(x.x(), x.y())[space->dof_component(i)];
  }
  return out;
}

double integrate(const Field& f, int component) {
  const Mesh& m = f.space->mesh();
  const CellQuadrature q = cell_quadrature(m.dim(), 2);
  double total = 0.0;
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    double cell_sum = 0.0;
    for (int iq = 0; iq < q.size(); ++iq)
      cell_sum += q.weights[iq] * evaluate(f, cell, q.points[iq], component);
    total += cell_sum;
  }
  return total * m.cell_measure();
}

namespace {

double squared_error(const FunctionSpace& s, int quad_points,
                     const std::function<double(int, RefPoint, int)>& diff) {
  const Mesh& m = s.mesh();
  const CellQuadrature q = cell_quadrature(m.dim(), quad_points);
  double total = 0.0;
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    for (int k = 0; k < s.n_components(); ++k) {
      for (int iq = 0; iq < q.size(); ++iq) {
        const double d = diff(cell, q.points[iq], k);
        total += q.weights[iq] * d * d;
      }
    }
  }
  return total * m.cell_measure();
}

}  // namespace

double l2_norm(const Field& f, int quad_points) {
  return std::sqrt(squared_error(*f.space, quad_points, [&](int c, RefPoint p, int k) {
    return evaluate(f, c, p, k);
  }));
}

double l2_error(const Field& f, const Field& reference, int quad_points) {
  check_same_space(f, reference);
  return std::sqrt(squared_error(*f.space, quad_points, [&](int c, RefPoint p, int k) {
    return evaluate(f, c, p, k) - evaluate(reference, c, p, k);
  }));
}

double l2_error(const Field& f, const ScalarFunction& reference, int quad_points) {
  const Mesh& m = f.space->mesh();
  return std::sqrt(squared_error(*f.space, quad_points, [&](int c, RefPoint p, int k) {
    const Vec2 x = m.to_physical(c, p);
    return evaluate(f, c, p, k) - reference(x.x(), x.y());
  }));
}

SpMat mass_matrix(const FunctionSpace& space) { return mixed_mass_matrix(space, space); }

SpMat mixed_mass_matrix(const FunctionSpace& test, const FunctionSpace& trial) {
  check_compatible(test, trial);
  const Mesh& m = test.mesh();
  const CellQuadrature q = cell_quadrature(m.dim(), 2);
  const double vol = m.cell_measure();
  std::vector<Eigen::Triplet<double>> trip;
  double pa[4], pb[4];
  for (int cell = 0; cell < m.n_cells(); ++cell) {
    for (int k = 0; k < test.n_components(); ++k) {
      const auto ra = test.dof_map(cell, k);
      const auto rb = trial.dof_map(cell, k);
      double local[4][4] = {};
      for (int iq = 0; iq < q.size(); ++iq) {
        test.basis(k, q.points[iq], pa);
        trial.basis(k, q.points[iq], pb);
        for (std::size_t i = 0; i < ra.size(); ++i)
          for (std::size_t j = 0; j < rb.size(); ++j) local[i][j] += q.weights[iq] * pa[i] * pb[j];
      }
      for (std::size_t i = 0; i < ra.size(); ++i)
        for (std::size_t j = 0; j < rb.size(); ++j)
          trip.emplace_back(ra[i], rb[j], local[i][j] * vol);
    }
  }
  SpMat M(test.n_dofs(), trial.n_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

void write_field_csv(const Field& f, std::ostream& out) {
  const FunctionSpace& s = *f.space;
  out.precision(17);
  if (s.n_components() == 1) {
    out << "dof_index,x,z,value\n";
    for (int i = 0; i < s.n_dofs(); ++i) {
      const Vec2 x = s.dof_coords(i);
      out << i << ',' << x.x() << ',' << x.y() << ',' << f.coeffs[i] << '\n';
    }
    return;
  }
  out << "cell,local_dof,value\n";
  for (int cell = 0; cell < s.mesh().n_cells(); ++cell) {
    const std::vector<int> dofs = s.cell_dofs(cell);
    for (std::size_t l = 0; l < dofs.size(); ++l)
      out << cell << ',' << l << ',' << f.coeffs[dofs[l]] << '\n';
  }
}

void check_compatible(const FunctionSpace& a, const FunctionSpace& b) {
  if (!(a.mesh() == b.mesh()) || a.n_components() != b.n_components()) {
    std::ostringstream os;
    os << "spaces " << to_string(a.tag()) << " and " << to_string(b.tag())
       << " do not share a mesh and component structure";
    fail(ErrorCode::SpaceMismatch, os.str());
  }
}

void check_same_space(const Field& a, const Field& b) {
  if (!a.space || !b.space || a.space->tag() != b.space->tag() ||
      !(a.space->mesh() == b.space->mesh())) {
    fail(ErrorCode::SpaceMismatch, "fields live in different spaces");
  }
}

}  // namespace rsadv

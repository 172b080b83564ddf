#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rsadv/mesh.hpp"

namespace rsadv {

using SpMat = Eigen::SparseMatrix<double>;

enum class SpaceTag {
  DG0,
  CG1,
  DG1,
  DG0xDG0,
  DG0xCG1,
  DG1xDG1,
  CG1xCG1,
  DG0xDG1,
  RT0,
  BrokenRT0,
  VectorDG1xDG1,
  VectorCG1xCG1,
};

/// One-directional element family. `None` marks the absent z-direction of
/// 1D spaces.
enum class Family { None, DG0, DG1, CG1 };

/// Tensor-product scalar component: family along x and along z.
struct ComponentSpec {
  Family fx = Family::DG0;
  Family fz = Family::None;
};

const char* to_string(SpaceTag tag) noexcept;
std::optional<SpaceTag> parse_space_tag(std::string_view name);
int tag_dimension(SpaceTag tag);
std::vector<ComponentSpec> tag_components(SpaceTag tag);

int family_size(Family f);
int family_degree(Family f);

/// Lowest-order tensor-product space on a structured mesh.
///
/// Each component has a local basis of Lagrange type: DG0 directions carry
/// one value at the cell centre, linear directions carry the values at the
/// two cell ends. Local DOF index within a component is a + nlx * b, with a
/// along x and b along z, so bilinear nodal components are ordered
/// bottom-left, bottom-right, top-left, top-right and RT0 components are
/// ordered (west, east) then (south, north).
///
/// Components without a continuous direction are numbered cell-major;
/// otherwise global index = jz * Nx + jx from the per-direction numbering.
/// Vector components are stored as contiguous blocks.
class FunctionSpace {
 public:
  FunctionSpace(MeshPtr mesh, SpaceTag tag);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  SpaceTag tag() const { return tag_; }

  int n_components() const { return static_cast<int>(components_.size()); }
  const ComponentSpec& component(int k) const { return components_[k]; }
  int n_dofs() const { return offsets_.back(); }
  int component_offset(int k) const { return offsets_[k]; }
  int component_size(int k) const { return offsets_[k + 1] - offsets_[k]; }

  int local_size(int k) const { return nlx_[k] * nlz_[k]; }
  int local_size_x(int k) const { return nlx_[k]; }
  int local_size_z(int k) const { return nlz_[k]; }

  /// Global DOFs (including the component offset) of component k in cell.
  std::span<const int> dof_map(int cell, int k = 0) const;
  /// All DOFs of the cell, component blocks in order.
  std::vector<int> cell_dofs(int cell) const;

  /// Reference-cell location of local DOF l of component k.
  RefPoint local_point(int k, int l) const;
  Vec2 dof_coords(int dof) const { return dof_coords_[dof]; }
  int dof_component(int dof) const;

  /// True when no component has a continuous direction.
  bool fully_broken() const { return fully_broken_; }
  int degree(int k, int axis) const;

  /// Local basis values of component k at p.
  void basis(int k, RefPoint p, double* out) const;
  /// Physical gradients of the local basis of component k at p.
  void basis_grad(int k, RefPoint p, double* gx, double* gz) const;

 private:
  MeshPtr mesh_;
  SpaceTag tag_;
  std::vector<ComponentSpec> components_;
  std::vector<int> offsets_;
  std::vector<int> nlx_;
  std::vector<int> nlz_;
  std::vector<int> local_offsets_;
  std::vector<int> dofs_;  // cell-major, component blocks inside each cell
  std::vector<Vec2> dof_coords_;
  bool fully_broken_ = true;
};

using SpacePtr = std::shared_ptr<const FunctionSpace>;

inline SpacePtr make_space(MeshPtr mesh, SpaceTag tag) {
  return std::make_shared<const FunctionSpace>(std::move(mesh), tag);
}

/// Coefficient vector bound to a space.
struct Field {
  SpacePtr space;
  Eigen::VectorXd coeffs;

  Field() = default;
  explicit Field(SpacePtr s);
  Field(SpacePtr s, Eigen::VectorXd c);
};

using ScalarFunction = std::function<double(double x, double z)>;
using VectorFunction = std::function<Vec2(double x, double z)>;

double evaluate(const Field& f, int cell, RefPoint p, int component = 0);
Vec2 evaluate_vector(const Field& f, int cell, RefPoint p);
Vec2 evaluate_gradient(const Field& f, int cell, RefPoint p, int component = 0);

/// L2 projection of an analytic function with `quad_points` Gauss points per
/// direction. Scalar functions are applied to every component.
Field project_analytic(const ScalarFunction& f, const SpacePtr& space, int quad_points = 4);
Field project_analytic(const VectorFunction& f, const SpacePtr& space, int quad_points = 4);
/// Nodal interpolation at the DOF locations.
Field interpolate_analytic(const ScalarFunction& f, const SpacePtr& space);
Field interpolate_analytic(const VectorFunction& f, const SpacePtr& space);

/// Integral of one component over the domain.
double integrate(const Field& f, int component = 0);
double l2_norm(const Field& f, int quad_points = 4);
double l2_error(const Field& f, const Field& reference, int quad_points = 4);
double l2_error(const Field& f, const ScalarFunction& reference, int quad_points = 4);

SpMat mass_matrix(const FunctionSpace& space);
/// Mixed mass matrix with rows indexed by `test` DOFs and columns by
/// `trial` DOFs; both spaces must share mesh and component count.
SpMat mixed_mass_matrix(const FunctionSpace& test, const FunctionSpace& trial);

void write_field_csv(const Field& f, std::ostream& out);

void check_same_space(const Field& a, const Field& b);
void check_compatible(const FunctionSpace& a, const FunctionSpace& b);

}  // namespace rsadv

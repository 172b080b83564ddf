#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rsadv/linalg.hpp"
#include "rsadv/spaces.hpp"

namespace rsadv {

/// Fully discontinuous counterpart of a tag (same local polynomials).
SpaceTag broken_tag(SpaceTag tag);

/// Sparse averaging operator from `src` to `tgt`: each target DOF is the
/// mean, over the cells that contain it, of `src` evaluated at the DOF's
/// location in that cell. For a fully broken target this is pointwise
/// interpolation. No pair validation is performed here.
SpMat averaging_matrix(const FunctionSpace& src, const FunctionSpace& tgt);

/// Number of cells contributing to each target DOF.
std::vector<int> contributor_counts(const FunctionSpace& tgt);

bool is_recovery_pair(SpaceTag src, SpaceTag tgt);
bool embeds(const FunctionSpace& src, const FunctionSpace& tgt);

/// L2 projection operator between two spaces on the same mesh. Broken
/// targets are handled cell by cell and stored as an explicit operator.
class L2Projector {
 public:
  L2Projector(SpacePtr src, SpacePtr tgt);
  Field apply(const Field& f) const;
  const SpacePtr& target() const { return tgt_; }

 private:
  SpacePtr src_;
  SpacePtr tgt_;
  SpMat explicit_;
  SpMat mixed_;
  std::shared_ptr<MassSolver> solver_;
};

/// Averaging recovery followed, on cells touching a wall, by the
/// curvature-minimising extension constrained by the interior recovered
/// values and the cell integral, then a second averaging pass. The
/// extension is applied to components whose source is piecewise constant
/// in the wall-normal direction; other components are already represented
/// at the wall.
class BoundaryRecovery {
 public:
  BoundaryRecovery(SpacePtr v0, SpacePtr vt);
  BoundaryRecovery(const BoundaryRecovery&) = delete;
  BoundaryRecovery& operator=(const BoundaryRecovery&) = delete;
  Field apply(const Field& src) const;

 private:
  struct CellRule {
    int cell;
    int component;
    std::vector<int> interior;  // local DOFs fixed to the recovered value
    const Eigen::MatrixXd* map;
  };

  SpacePtr v0_;
  SpacePtr vt_;
  SpacePtr vb_;
  SpMat average_;
  SpMat to_broken_;
  SpMat back_;
  std::vector<CellRule> rules_;
  std::map<std::vector<int>, Eigen::MatrixXd> kkt_cache_;
};

Field recover_average(const Field& src, const SpacePtr& target);
Field recover_with_boundary(const Field& src, const SpacePtr& target);
/// Per-cell L2 projection into a fully broken space.
Field project_broken(const Field& src, const SpacePtr& target);
/// Exact re-expansion into a richer fully broken space.
Field inject(const Field& src, const SpacePtr& target);
/// Global L2 projection.
Field project_PA(const Field& src, const SpacePtr& target);
/// Pointwise interpolation into the broken counterpart of `target`,
/// followed by averaging back into `target`.
Field project_PB(const Field& src, const SpacePtr& target);

enum class Projection { A, B };

struct Quadruple {
  SpaceTag v0;
  SpaceTag v1;
  SpaceTag vt;
  SpaceTag vh;

  bool operator==(const Quadruple&) const = default;
};

const std::vector<Quadruple>& supported_quadruples();

/// Precomputed operators R, I, P-hat and P for one quadruple on one mesh.
class SchemeOperators {
 public:
  SchemeOperators(MeshPtr mesh, Quadruple spaces, Projection projection, bool boundary_recovery);

  const SpacePtr& v0() const { return v0_; }
  const SpacePtr& v1() const { return v1_; }
  const SpacePtr& vt() const { return vt_; }
  const SpacePtr& vh() const { return vh_; }
  Projection projection() const { return projection_; }
  bool boundary_recovery() const { return boundary_ != nullptr; }

  Field recover(const Field& rho) const;
  Field project_hat(const Field& recovered) const;
  /// I (R - P-hat R + 1) applied to a V0 field.
  Field apply_j(const Field& rho) const;
  /// P_A or P_B from V1 back to V0.
  Field project(const Field& q) const;

 private:
  void check_v0(const Field& rho) const;

  SpacePtr v0_, v1_, vt_, vh_;
  Projection projection_;
  SpMat average_;      // V0 -> Vt
  SpMat inject_t_;     // Vt -> V1
  SpMat inject_h_;     // Vh -> V1
  SpMat inject_0_;     // V0 -> V1
  SpMat interp_h_;     // V1 -> Vh
  SpMat average_h0_;   // Vh -> V0
  std::unique_ptr<L2Projector> hat_;
  std::unique_ptr<L2Projector> pa_;
  std::unique_ptr<BoundaryRecovery> boundary_;
};

}  // namespace rsadv

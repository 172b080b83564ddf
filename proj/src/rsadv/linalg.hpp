#pragma once

#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace rsadv {

using SpMat = Eigen::SparseMatrix<double>;

/// Solver for symmetric positive definite mass matrices. Small systems use
/// a sparse LDLT factorisation, large ones diagonally preconditioned CG.
/// Every solve is checked against a relative residual of 1e-12.
class MassSolver {
 public:
  static constexpr int kDirectLimit = 100000;

  explicit MassSolver(SpMat matrix);
  ~MassSolver();
  MassSolver(MassSolver&&) noexcept;
  MassSolver& operator=(MassSolver&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const SpMat& matrix() const { return matrix_; }

 private:
  struct Impl;
  SpMat matrix_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rsadv

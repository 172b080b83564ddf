#include "rsadv/linalg.hpp"

#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "rsadv/error.hpp"

namespace rsadv {

struct MassSolver::Impl {
  bool direct = true;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
};

MassSolver::MassSolver(SpMat matrix) : matrix_(std::move(matrix)), impl_(std::make_unique<Impl>()) {
  if (matrix_.rows() != matrix_.cols()) fail(ErrorCode::InvalidArgument, "mass matrix is not square");
  matrix_.makeCompressed();
  impl_->direct = matrix_.rows() < kDirectLimit;
  if (impl_->direct) {
    impl_->ldlt.compute(matrix_);
    if (impl_->ldlt.info() != Eigen::Success)
      fail(ErrorCode::SingularMatrix, "mass matrix factorisation failed");
    const auto d = impl_->ldlt.vectorD();
    if (d.size() > 0 && !(d.minCoeff() > 0.0))
      fail(ErrorCode::SingularMatrix, "mass matrix is not positive definite");
  } else {
    impl_->cg.setTolerance(1e-14);
    impl_->cg.setMaxIterations(10000);
    impl_->cg.compute(matrix_);
    if (impl_->cg.info() != Eigen::Success)
      fail(ErrorCode::SingularMatrix, "mass matrix preconditioner setup failed");
  }
}

MassSolver::~MassSolver() = default;
MassSolver::MassSolver(MassSolver&&) noexcept = default;
MassSolver& MassSolver::operator=(MassSolver&&) noexcept = default;

Eigen::VectorXd MassSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = impl_->direct ? Eigen::VectorXd(impl_->ldlt.solve(rhs))
                                    : Eigen::VectorXd(impl_->cg.solve(rhs));
  const double bnorm = rhs.norm();
  const double res = (matrix_ * x - rhs).norm();
  if (!(res <= 1e-12 * bnorm) && !(bnorm == 0.0 && res == 0.0)) {
    std::ostringstream os;
    os << "mass solve residual " << res << " exceeds tolerance (rhs norm " << bnorm << ")";
    fail(ErrorCode::SolverNonConvergence, os.str());
  }
  return x;
}

}  // namespace rsadv

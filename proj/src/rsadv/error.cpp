#include "rsadv/error.hpp"

namespace rsadv {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::SpaceMismatch: return "space-mismatch";
    case ErrorCode::UnsupportedPair: return "unsupported-pair";
    case ErrorCode::NonEmbeddable: return "non-embeddable";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::SolverNonConvergence: return "solver-nonconvergence";
    case ErrorCode::SingularKkt: return "singular-kkt";
    case ErrorCode::WallFluxViolation: return "wall-flux-violation";
    case ErrorCode::CflViolation: return "cfl-violation";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::NoInstabilityFound: return "no-instability-found";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace rsadv

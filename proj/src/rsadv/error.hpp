#pragma once

#include <stdexcept>
#include <string>

namespace rsadv {

enum class ErrorCode {
  InvalidDimension = 1,
  InvalidArgument,
  SpaceMismatch,
  UnsupportedPair,
  NonEmbeddable,
  SingularMatrix,
  SolverNonConvergence,
  SingularKkt,
  WallFluxViolation,
  CflViolation,
  DegenerateInput,
  NoInstabilityFound,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rsadv

#pragma once

#include <stdexcept>
#include <string>

namespace apm {

/// Named reasons a manifold description (or a tensor argument) can be rejected.
enum class ErrorCode {
  NotSymmetric,
  NotPositiveDefinite,
  PSquareNotIdentity,
  PNotCompatible,
  TraceNonZero,
  BracketNotAntisymmetric,
  JacobiViolated,
  AssociatedMetricSingular,
  NotTorsionLike,
  NotW3,
  InvalidDimension,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Thrown whenever a validation invariant fails; carries the violated
/// invariant's name so callers (and the CLI) can surface it verbatim.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace apm

#pragma once

#include <stdexcept>
#include <string>

namespace bura {

enum class ErrorCode {
  NonConvergence,
  DegenerateDegree,
  InterlacingViolated,
  SchemaError,
  InvariantFailure,
  NotConverged,
  NonPositivePivot,
  DimensionTooLarge,
  NonpositiveCoefficient,
  IndexOutOfRange,
  GridParity,
  SpectrumViolation,
  AlphaOutOfRange,
  LengthMismatch,
  ZeroReference,
  ConfigError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this type; `code()` identifies the
// failure class so callers and tests can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bura

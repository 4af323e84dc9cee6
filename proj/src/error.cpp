#include "bura/error.hpp"

namespace bura {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateDegree: return "DegenerateDegree";
    case ErrorCode::InterlacingViolated: return "InterlacingViolated";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantFailure: return "InvariantFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NonPositivePivot: return "NonPositivePivot";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NonpositiveCoefficient: return "NonpositiveCoefficient";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::GridParity: return "GridParity";
    case ErrorCode::SpectrumViolation: return "SpectrumViolation";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bura

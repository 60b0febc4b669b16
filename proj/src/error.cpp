#include "opvar/error.hpp"

namespace opvar {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::BadBounds: return "BadBounds";
    case ErrorKind::BoundsViolated: return "BoundsViolated";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotOrthogonalFamily: return "NotOrthogonalFamily";
    case ErrorKind::IneligibleQNorm: return "IneligibleQNorm";
    case ErrorKind::EvaluatorDimensionDrift: return "EvaluatorDimensionDrift";
    case ErrorKind::NegativeDensity: return "NegativeDensity";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
  }
  return "Unknown";
}

}  // namespace opvar

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opvar {

enum class ErrorKind {
  InvalidArgument,
  NotSquare,
  NotHermitian,
  NotPSD,
  DimensionMismatch,
  BadWeights,
  BadBounds,
  BoundsViolated,
  NotOrthogonal,
  ZeroVector,
  NotOrthogonalFamily,
  IneligibleQNorm,
  EvaluatorDimensionDrift,
  NegativeDensity,
  IoError,
  SchemaError,
  NonFiniteValue,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this exception; kind() carries
// the contract violation so callers (and the CLI) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace opvar

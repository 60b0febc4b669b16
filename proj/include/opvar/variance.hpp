#pragma once

#include <optional>
#include <vector>

#include "opvar/linalg.hpp"
#include "opvar/report.hpp"

namespace opvar {

/// Nonnegative weights summing to one within 1e-12.
class ProbabilityWeights {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws BadWeights when the invariants fail.
  explicit ProbabilityWeights(std::vector<double> t);

  static ProbabilityWeights uniform(std::size_t n);
  /// Divides by the sum; still rejects negative, non-finite or all-zero input.
  static ProbabilityWeights normalized(std::vector<double> raw);

  std::size_t size() const noexcept { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  const std::vector<double>& values() const noexcept { return t_; }

 private:
  std::vector<double> t_;
};

/// (t_i, A_i) with a common square dimension.
class WeightedFamily {
 public:
  /// Throws BadWeights (count mismatch or empty) / DimensionMismatch / NotSquare.
  WeightedFamily(ProbabilityWeights weights, std::vector<ComplexMatrix> matrices);

  static WeightedFamily uniform(std::vector<ComplexMatrix> matrices);

  std::size_t size() const noexcept { return matrices_.size(); }
  Eigen::Index dim() const noexcept { return matrices_.front().rows(); }
  const ProbabilityWeights& weights() const noexcept { return weights_; }
  const std::vector<ComplexMatrix>& matrices() const noexcept { return matrices_; }

  /// 1 + sum t_i ||A_i||_inf^2, the natural scale of both identity sides.
  double scale() const;

 private:
  ProbabilityWeights weights_;
  std::vector<ComplexMatrix> matrices_;
};

/// m_i <= M_i scalar bounds with m_i >= 0 in strict mode.
struct ScalarBounds {
  std::vector<double> lower;  // m_i
  std::vector<double> upper;  // M_i
};

enum class BoundsMode {
  Strict,   // positive operators, 0 <= m_i as printed
  Relaxed,  // any Hermitian A_i with m_i I <= A_i <= M_i I
};

ComplexMatrix weighted_mean(const WeightedFamily& fam);

struct VarianceSides {
  ComplexMatrix lhs;  // sum t_i |A_i - mean|^2
  ComplexMatrix rhs;  // sum t_i |A_i|^2 - |mean|^2
  CheckReport report;
};

/// Both sides of the weighted operator variance identity; the report residual
/// is ||lhs - rhs||_inf against 1e-11 * scale.
VarianceSides variance_sides(const WeightedFamily& fam, const CheckOptions& opts = {});

/// min eig(sum t_i |A_i|^2 - |sum t_i A_i|^2) against -1e-11 * scale.
CheckReport am_qm_margin(const WeightedFamily& fam, const CheckOptions& opts = {});

/// D = sum t_i A_i^2 - (sum t_i A_i)^2 for Hermitian A_i.
ComplexMatrix variance_difference(const WeightedFamily& fam);

struct SandwichConstants {
  std::vector<double> alpha;
  std::vector<double> beta;
  double lower = 0.0;  // sum t_i beta_i^2
  double upper = 0.0;  // sum t_i alpha_i^2
};

/// alpha_i = max{|M_i - sum_j t_j m_j|, |m_i - sum_j t_j M_j|}, beta_i the min.
SandwichConstants sandwich_constants(const ProbabilityWeights& t, const ScalarBounds& bounds);

/// Checks lower * I <= D <= upper * I through two PSD margins (1e-10 * scale).
CheckReport variance_bounds(const WeightedFamily& fam, const ScalarBounds& bounds,
                            BoundsMode mode = BoundsMode::Strict, const CheckOptions& opts = {});

/// The Hilbert-space identity sum t_i ||x_i - xbar||^2 = sum t_i ||x_i||^2 - ||xbar||^2,
/// computed directly and again through the rank-one family x_i (x) e.
/// e defaults to the first standard basis vector.
CheckReport vector_variance_identity(const std::vector<Vector>& xs, const ProbabilityWeights& weights,
                                     const std::optional<Vector>& e = std::nullopt,
                                     const CheckOptions& opts = {});

/// ||A - trhat(A) I||_2^2 against ||A||_2^2 - n |trhat(A)|^2.
CheckReport normalized_trace_identity(const ComplexMatrix& a, const CheckOptions& opts = {});

}  // namespace opvar

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opvar/linalg.hpp"
#include "opvar/report.hpp"
#include "opvar/variance.hpp"

namespace opvar {

enum class QuadratureRule { Midpoint, Trapezoid };

QuadratureRule parse_rule(const std::string& text);
std::string to_string(QuadratureRule rule);

/// A continuous field t -> A_t on [a, b] with a probability density.
struct OperatorFieldSpec {
  double a = 0.0;
  double b = 1.0;
  std::function<ComplexMatrix(double)> evaluator;
  /// Defaults to the uniform density 1 / (b - a) when empty.
  std::function<double(double)> density;
  /// Set when the evaluator must not be called from several threads.
  bool sequential = false;
};

/// A discretized field: nodes t_k, probability weights w_k and samples A_{t_k}.
struct SampledField {
  std::vector<double> nodes;
  WeightedFamily family;

  const ProbabilityWeights& weights() const noexcept { return family.weights(); }
  const std::vector<ComplexMatrix>& matrices() const noexcept { return family.matrices(); }
};

/// `panels` subintervals of equal width. Midpoint samples one node per panel,
/// trapezoid samples the panels + 1 endpoints. Weights are rule weight times
/// density, divided by their computed sum.
SampledField discretize_field(const OperatorFieldSpec& spec, int panels, QuadratureRule rule);

/// sum_k w_k A_{t_k}.
ComplexMatrix bochner_integral(const SampledField& sf);

/// The variance identity on the discretized measure.
CheckReport integral_identity_check(const SampledField& sf, const CheckOptions& opts = {});

/// One report per panel count: value/tolerance are the identity residual;
/// details carry integral_error (operator-norm distance to the reference, or
/// to the finest level when no reference is given) and empirical_order
/// against the previous level.
std::vector<CheckReport> refinement_study(const OperatorFieldSpec& spec, const std::vector<int>& panel_counts,
                                          QuadratureRule rule,
                                          const std::optional<ComplexMatrix>& reference = std::nullopt,
                                          const CheckOptions& opts = {});

/// log(e_k / e_{k+1}) / log(n_{k+1} / n_k) for consecutive levels.
std::vector<double> empirical_orders(const std::vector<int>& panel_counts, const std::vector<double>& errors);

/// Built-in fields with their exact mean under the uniform density.
struct BuiltinField {
  std::string name;
  OperatorFieldSpec spec;
  ComplexMatrix exact_mean;
};

BuiltinField constant_field(const ComplexMatrix& c, double a, double b);
/// A_t = t C.
BuiltinField linear_field(const ComplexMatrix& c, double a, double b);
/// A_t = [[cos t, sin t], [-sin t, cos t]].
BuiltinField rotation_field(double a, double b);
/// A_t = (sum_k c_k t^k) I_dim.
BuiltinField polynomial_field(const std::vector<double>& coeffs, int dim, double a, double b);

}  // namespace opvar

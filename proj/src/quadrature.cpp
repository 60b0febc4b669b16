#include "opvar/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "opvar/error.hpp"
#include "opvar/parallel.hpp"

namespace opvar {

QuadratureRule parse_rule(const std::string& text) {
  if (text == "midpoint") return QuadratureRule::Midpoint;
  if (text == "trapezoid") return QuadratureRule::Trapezoid;
  throw Error(ErrorKind::InvalidArgument, "unknown quadrature rule '" + text + "' (midpoint|trapezoid)");
}

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Midpoint ? "midpoint" : "trapezoid";
}

SampledField discretize_field(const OperatorFieldSpec& spec, int panels, QuadratureRule rule) {
  if (panels < 1) throw Error(ErrorKind::InvalidArgument, "need at least one panel");
  if (!(spec.b > spec.a) || !std::isfinite(spec.a) || !std::isfinite(spec.b))
    throw Error(ErrorKind::InvalidArgument, "field domain must be a finite interval with a < b");
  if (!spec.evaluator) throw Error(ErrorKind::InvalidArgument, "field has no evaluator");

  const double width = (spec.b - spec.a) / panels;
  std::vector<double> nodes;
  std::vector<double> rule_weights;
  if (rule == QuadratureRule::Midpoint) {
    for (int k = 0; k < panels; ++k) {
      nodes.push_back(spec.a + (k + 0.5) * width);
      rule_weights.push_back(width);
    }
  } else {
    for (int k = 0; k <= panels; ++k) {
      nodes.push_back(k == panels ? spec.b : spec.a + k * width);
      rule_weights.push_back(k == 0 || k == panels ? width / 2.0 : width);
    }
  }

  const double uniform = 1.0 / (spec.b - spec.a);
  std::vector<double> raw(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double rho = spec.density ? spec.density(nodes[k]) : uniform;
    if (!std::isfinite(rho) || rho < 0.0) {
      std::ostringstream os;
      os << "density(" << nodes[k] << ") = " << rho;
      throw Error(ErrorKind::NegativeDensity, os.str());
    }
    raw[k] = rule_weights[k] * rho;
  }

  std::vector<ComplexMatrix> samples(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) { samples[k] = spec.evaluator(nodes[k]); },
               spec.sequential ? 1u : 0u);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].rows() != samples.front().rows() || samples[k].cols() != samples.front().cols()) {
      std::ostringstream os;
      os << "evaluator returned " << samples[k].rows() << "x" << samples[k].cols() << " at t = " << nodes[k]
         << ", expected " << samples.front().rows() << "x" << samples.front().cols();
      throw Error(ErrorKind::EvaluatorDimensionDrift, os.str());
    }
    if (!all_finite(samples[k])) throw Error(ErrorKind::NonFiniteValue, "evaluator returned a non-finite entry");
  }

  return SampledField{std::move(nodes),
                      WeightedFamily(ProbabilityWeights::normalized(std::move(raw)), std::move(samples))};
}

ComplexMatrix bochner_integral(const SampledField& sf) { return weighted_mean(sf.family); }

CheckReport integral_identity_check(const SampledField& sf, const CheckOptions& opts) {
  auto report = variance_sides(sf.family, opts).report;
  report.name = "integral-identity";
  return report;
}

std::vector<double> empirical_orders(const std::vector<int>& panel_counts, const std::vector<double>& errors) {
  if (panel_counts.size() != errors.size()) throw Error(ErrorKind::InvalidArgument, "one error per level required");
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    orders.push_back(std::log(errors[k] / errors[k + 1]) /
                     std::log(static_cast<double>(panel_counts[k + 1]) / panel_counts[k]));
  }
  return orders;
}

std::vector<CheckReport> refinement_study(const OperatorFieldSpec& spec, const std::vector<int>& panel_counts,
                                          QuadratureRule rule, const std::optional<ComplexMatrix>& reference,
                                          const CheckOptions& opts) {
  if (panel_counts.empty()) throw Error(ErrorKind::InvalidArgument, "refinement study needs at least one level");
  for (std::size_t k = 1; k < panel_counts.size(); ++k)
    if (panel_counts[k] <= panel_counts[k - 1])
      throw Error(ErrorKind::InvalidArgument, "refinement levels must be strictly increasing");

  std::vector<ComplexMatrix> integrals;
  std::vector<CheckReport> reports;
  for (int n : panel_counts) {
    const auto sf = discretize_field(spec, n, rule);
    integrals.push_back(bochner_integral(sf));
    auto r = integral_identity_check(sf, opts);
    r.name = "refinement";
    reports.push_back(std::move(r));
  }

  const ComplexMatrix target = reference.value_or(integrals.back());
  std::vector<double> errors;
  for (const auto& m : integrals) {
    if (m.rows() != target.rows() || m.cols() != target.cols())
      throw Error(ErrorKind::DimensionMismatch, "reference integral has the wrong shape");
    errors.push_back(operator_norm(m - target));
  }
  const auto orders = empirical_orders(panel_counts, errors);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const int nodes = rule == QuadratureRule::Midpoint ? panel_counts[k] : panel_counts[k] + 1;
    reports[k].with("panels", panel_counts[k]).with("nodes", nodes).with("integral_error", errors[k]);
    if (k > 0 && std::isfinite(orders[k - 1])) reports[k].with("empirical_order", orders[k - 1]);
  }
  return reports;
}

BuiltinField constant_field(const ComplexMatrix& c, double a, double b) {
  OperatorFieldSpec spec{a, b, [c](double) { return c; }, {}, false};
  return {"constant", std::move(spec), c};
}

BuiltinField linear_field(const ComplexMatrix& c, double a, double b) {
  OperatorFieldSpec spec{a, b, [c](double t) -> ComplexMatrix { return t * c; }, {}, false};
  return {"linear", std::move(spec), 0.5 * (a + b) * c};
}

BuiltinField rotation_field(double a, double b) {
  auto eval = [](double t) {
    ComplexMatrix r(2, 2);
    r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    return r;
  };
  const double span = b - a;
  const double c = (std::sin(b) - std::sin(a)) / span;
  const double s = (std::cos(a) - std::cos(b)) / span;
  ComplexMatrix mean(2, 2);
  mean << c, s, -s, c;
  return {"rotation", OperatorFieldSpec{a, b, eval, {}, false}, mean};
}

BuiltinField polynomial_field(const std::vector<double>& coeffs, int dim, double a, double b) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "polynomial field needs coefficients");
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "polynomial field needs dim >= 1");
  auto eval = [coeffs, dim](double t) -> ComplexMatrix {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * t + *it;
    return v * ComplexMatrix::Identity(dim, dim);
  };
  double mean = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double e = static_cast<double>(k + 1);
    mean += coeffs[k] * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  mean /= (b - a);
  return {"polynomial", OperatorFieldSpec{a, b, eval, {}, false}, mean * ComplexMatrix::Identity(dim, dim)};
}

}  // namespace opvar

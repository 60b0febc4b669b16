#include "opvar/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opvar/error.hpp"

namespace opvar {

namespace {

void require_same_shape(const std::vector<ComplexMatrix>& as) {
  if (as.empty()) throw Error(ErrorKind::InvalidArgument, "family is empty");
  for (std::size_t i = 1; i < as.size(); ++i) {
    if (as[i].rows() != as[0].rows() || as[i].cols() != as[0].cols()) {
      std::ostringstream os;
      os << "matrix " << i << " is " << as[i].rows() << "x" << as[i].cols() << ", expected " << as[0].rows() << "x"
         << as[0].cols();
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
  }
}

void require_finite_order(SchattenOrder p) {
  if (p.is_infinite()) throw Error(ErrorKind::InvalidArgument, "this check needs a finite Schatten order");
}

ComplexMatrix uniform_mean(const std::vector<ComplexMatrix>& as) {
  ComplexMatrix sum = ComplexMatrix::Zero(as[0].rows(), as[0].cols());
  for (const auto& a : as) sum += a;
  return sum / static_cast<double>(as.size());
}

// Shared shape of both mean-deviation theorems: deviation V against
// combination C = n^{c-1} * sum_powers - n * mean_power.
struct DeviationSides {
  double deviation = 0.0;
  double weighted_sum = 0.0;  // n^{c-1} * sum_powers
  double mean_term = 0.0;     // n * mean_power
  double combination() const { return weighted_sum - mean_term; }
  double scale() const { return 1.0 + deviation + weighted_sum + mean_term; }
};

template <typename PowerFn>
DeviationSides deviation_sides(const std::vector<ComplexMatrix>& as, double exponent_c, PowerFn power) {
  const double n = static_cast<double>(as.size());
  const ComplexMatrix mean = uniform_mean(as);
  DeviationSides s;
  double sum_powers = 0.0;
  for (const auto& a : as) {
    s.deviation += power(a - mean);
    sum_powers += power(a);
  }
  s.weighted_sum = std::pow(n, exponent_c - 1.0) * sum_powers;
  s.mean_term = n * power(mean);
  return s;
}

CheckReport finish_deviation_check(std::string name, const DeviationSides& s, double p, double margin,
                                   bool equality_case, const CheckOptions& opts) {
  const double tolerance = 1e-9 * s.scale() * opts.tolerance_scale;
  auto report = equality_case ? CheckReport::residual(std::move(name), std::abs(s.deviation - s.combination()), tolerance)
                              : CheckReport::margin(std::move(name), margin, tolerance);
  const double magnitude = s.scale() - 1.0;
  report.with("p", p)
      .with("deviation", s.deviation)
      .with("combination", s.combination())
      .with("relative_margin", magnitude > 0.0 ? margin / magnitude : 0.0)
      .with("scale", s.scale());
  return report;
}

}  // namespace

CheckReport lemma_sum_bounds(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts) {
  require_same_shape(as);
  require_finite_order(p);
  ComplexMatrix sum = ComplexMatrix::Zero(as[0].rows(), as[0].cols());
  double sum_powers = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const auto& a = as[i];
    const double floor = -1e-10 * (1.0 + operator_norm(a));
    const double lowest = min_eigenvalue(a);
    if (lowest < floor) {
      std::ostringstream os;
      os << "A_" << i << " has eigenvalue " << lowest << "; the sum bounds need positive operators";
      throw Error(ErrorKind::NotPSD, os.str());
    }
    sum += a;
    sum_powers += schatten_power(a, p);
  }
  const double pv = p.value();
  const double factor = std::pow(static_cast<double>(as.size()), pv - 1.0);
  const double middle = schatten_power(sum, p);
  const double lower = pv < 1.0 ? factor * sum_powers : sum_powers;
  const double upper = pv < 1.0 ? sum_powers : factor * sum_powers;
  const double lower_margin = middle - lower;
  const double upper_margin = upper - middle;
  const double scale = 1.0 + std::max({lower, middle, upper});
  return CheckReport::margin("lemma-sum-bounds", std::min(lower_margin, upper_margin),
                             1e-9 * scale * opts.tolerance_scale)
      .with("p", pv)
      .with("lower", lower)
      .with("middle", middle)
      .with("upper", upper)
      .with("lower_margin", lower_margin)
      .with("upper_margin", upper_margin)
      .with("scale", scale);
}

CheckReport thm_pnorm_check(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts) {
  require_same_shape(as);
  require_finite_order(p);
  const double pv = p.value();
  const auto s = deviation_sides(as, pv / 2.0, [&](const ComplexMatrix& m) { return schatten_power(m, p); });
  const double margin = pv < 2.0 ? s.deviation - s.combination() : s.combination() - s.deviation;
  return finish_deviation_check("thm-p", s, pv, margin, pv == 2.0, opts);
}

CheckReport thm_sqnorm_check(const std::vector<ComplexMatrix>& as, SchattenOrder p, const CheckOptions& opts) {
  require_same_shape(as);
  require_finite_order(p);
  const double pv = p.value();
  const auto s = deviation_sides(as, 2.0 / pv, [&](const ComplexMatrix& m) {
    const double norm = schatten_norm(m, p);
    return norm * norm;
  });
  const double margin = pv < 2.0 ? s.combination() - s.deviation : s.deviation - s.combination();
  auto report = finish_deviation_check("thm-sq", s, pv, margin, pv == 2.0, opts);
  report.with("reversed_margin", -margin);
  return report;
}

std::vector<ComplexMatrix> make_orthogonal_family(const std::vector<Vector>& es) {
  if (es.empty()) throw Error(ErrorKind::InvalidArgument, "no vectors");
  std::vector<double> norms;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].size() != es[0].size()) throw Error(ErrorKind::DimensionMismatch, "vectors differ in dimension");
    const double norm = es[i].norm();
    if (!(norm > 0.0)) {
      std::ostringstream os;
      os << "vector " << i << " is zero";
      throw Error(ErrorKind::ZeroVector, os.str());
    }
    norms.push_back(norm);
  }
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      const double overlap = std::abs(inner(es[i], es[j]));
      if (overlap > 1e-10 * norms[i] * norms[j]) {
        std::ostringstream os;
        os << "|<e_" << i << ", e_" << j << ">| = " << overlap;
        throw Error(ErrorKind::NotOrthogonal, os.str());
      }
    }
  }
  std::vector<ComplexMatrix> family;
  family.reserve(es.size());
  for (std::size_t i = 0; i < es.size(); ++i) family.push_back(rank_one(es[i], es[i]) / norms[i]);
  return family;
}

double max_cross_product(const std::vector<ComplexMatrix>& as) {
  double worst = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i)
    for (std::size_t j = 0; j < as.size(); ++j)
      if (i != j) worst = std::max(worst, operator_norm(as[i].adjoint() * as[j]));
  return worst;
}

CheckReport qnorm_orthogonal_check(const std::vector<ComplexMatrix>& as, const ProbabilityWeights& t,
                                   SchattenOrder p, const CheckOptions& opts) {
  if (!p.q_norm_eligible())
    throw Error(ErrorKind::IneligibleQNorm, "Schatten order " + p.to_string() + " is not a Q-norm (needs p >= 2 or inf)");
  require_same_shape(as);
  if (t.size() != as.size()) throw Error(ErrorKind::BadWeights, "one weight per matrix required");

  double largest = 0.0;
  for (const auto& a : as) largest = std::max(largest, operator_norm(a));
  const double cross = max_cross_product(as);
  const double cross_limit = 1e-10 * (1.0 + largest * largest);
  if (cross > cross_limit) {
    std::ostringstream os;
    os << "max ||A_i^* A_j|| = " << cross << " exceeds " << cross_limit;
    throw Error(ErrorKind::NotOrthogonalFamily, os.str());
  }

  ComplexMatrix root_sum = ComplexMatrix::Zero(as[0].rows(), as[0].cols());
  ComplexMatrix mean = ComplexMatrix::Zero(as[0].rows(), as[0].cols());
  for (std::size_t i = 0; i < as.size(); ++i) {
    root_sum += std::sqrt(t[i]) * as[i];
    mean += t[i] * as[i];
  }
  const double root_norm = q_norm(root_sum, p);
  const double lhs = root_norm * root_norm;
  double rhs = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double d = q_norm(as[i] - mean, p);
    rhs += t[i] * d * d;
  }
  const double mean_norm = q_norm(mean, p);
  rhs += mean_norm * mean_norm;

  const double scale = 1.0 + std::max(lhs, rhs);
  return CheckReport::margin("qnorm-orthogonal", rhs - lhs, 1e-9 * scale * opts.tolerance_scale)
      .with("p", p.value())
      .with("lhs", lhs)
      .with("rhs", rhs)
      .with("lhs_via_qhat", q_hat_norm(abs_squared(root_sum), p))
      .with("max_cross_product", cross)
      .with("scale", scale);
}

}  // namespace opvar

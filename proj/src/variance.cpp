#include "opvar/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opvar/error.hpp"
#include "opvar/schatten.hpp"

namespace opvar {

namespace {

void check_weight_entries(const std::vector<double>& t) {
  if (t.empty()) throw Error(ErrorKind::BadWeights, "weight vector is empty");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0) {
      std::ostringstream os;
      os << "weight t[" << i << "] = " << t[i] << " is not a nonnegative finite number";
      throw Error(ErrorKind::BadWeights, os.str());
    }
  }
}

}  // namespace

ProbabilityWeights::ProbabilityWeights(std::vector<double> t) : t_(std::move(t)) {
  check_weight_entries(t_);
  const double sum = std::accumulate(t_.begin(), t_.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << sum << ", not 1";
    throw Error(ErrorKind::BadWeights, os.str());
  }
}

ProbabilityWeights ProbabilityWeights::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::BadWeights, "uniform weights need n >= 1");
  return ProbabilityWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityWeights ProbabilityWeights::normalized(std::vector<double> raw) {
  check_weight_entries(raw);
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(sum > 0.0)) throw Error(ErrorKind::BadWeights, "weights sum to zero");
  for (double& w : raw) w /= sum;
  return ProbabilityWeights(std::move(raw));
}

WeightedFamily::WeightedFamily(ProbabilityWeights weights, std::vector<ComplexMatrix> matrices)
    : weights_(std::move(weights)), matrices_(std::move(matrices)) {
  if (matrices_.empty()) throw Error(ErrorKind::BadWeights, "family is empty");
  if (weights_.size() != matrices_.size()) {
    std::ostringstream os;
    os << weights_.size() << " weights for " << matrices_.size() << " matrices";
    throw Error(ErrorKind::BadWeights, os.str());
  }
  const auto n = matrices_.front().rows();
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto& a = matrices_[i];
    if (a.rows() != a.cols()) throw Error(ErrorKind::NotSquare, "family matrices must be square");
    if (a.rows() != n) {
      std::ostringstream os;
      os << "matrix " << i << " is " << a.rows() << "x" << a.cols() << ", expected " << n << "x" << n;
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
  }
}

WeightedFamily WeightedFamily::uniform(std::vector<ComplexMatrix> matrices) {
  auto t = ProbabilityWeights::uniform(matrices.size());
  return WeightedFamily(std::move(t), std::move(matrices));
}

double WeightedFamily::scale() const {
  double s = 1.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double norm = operator_norm(matrices_[i]);
    s += weights_[i] * norm * norm;
  }
  return s;
}

ComplexMatrix weighted_mean(const WeightedFamily& fam) {
  ComplexMatrix mean = ComplexMatrix::Zero(fam.dim(), fam.dim());
  for (std::size_t i = 0; i < fam.size(); ++i) mean += fam.weights()[i] * fam.matrices()[i];
  return mean;
}

VarianceSides variance_sides(const WeightedFamily& fam, const CheckOptions& opts) {
  const ComplexMatrix mean = weighted_mean(fam);
  const auto n = fam.dim();
  ComplexMatrix lhs = ComplexMatrix::Zero(n, n);
  ComplexMatrix second_moment = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double t = fam.weights()[i];
    lhs += t * abs_squared(fam.matrices()[i] - mean);
    second_moment += t * abs_squared(fam.matrices()[i]);
  }
  ComplexMatrix rhs = second_moment - abs_squared(mean);
  const double scale = fam.scale();
  auto report = CheckReport::residual("variance-identity", operator_norm(lhs - rhs),
                                      1e-11 * scale * opts.tolerance_scale)
                    .with("n", static_cast<double>(fam.size()))
                    .with("dim", static_cast<double>(n))
                    .with("scale", scale)
                    .with("lhs_norm", operator_norm(lhs))
                    .with("rhs_norm", operator_norm(rhs));
  return {std::move(lhs), std::move(rhs), std::move(report)};
}

CheckReport am_qm_margin(const WeightedFamily& fam, const CheckOptions& opts) {
  const ComplexMatrix mean = weighted_mean(fam);
  ComplexMatrix diff = -abs_squared(mean);
  for (std::size_t i = 0; i < fam.size(); ++i) diff += fam.weights()[i] * abs_squared(fam.matrices()[i]);
  const double scale = fam.scale();
  return CheckReport::margin("am-qm", min_eigenvalue(diff), 1e-11 * scale * opts.tolerance_scale)
      .with("scale", scale)
      .with("difference_norm", operator_norm(diff));
}

ComplexMatrix variance_difference(const WeightedFamily& fam) {
  const ComplexMatrix mean = weighted_mean(fam);
  ComplexMatrix d = -(mean * mean);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& a = fam.matrices()[i];
    d += fam.weights()[i] * (a * a);
  }
  return d;
}

SandwichConstants sandwich_constants(const ProbabilityWeights& t, const ScalarBounds& bounds) {
  const std::size_t n = t.size();
  if (bounds.lower.size() != n || bounds.upper.size() != n)
    throw Error(ErrorKind::BadBounds, "need one (m_i, M_i) pair per weight");
  // The inner sums run over the whole family, independent of the free index.
  double mean_lower = 0.0;
  double mean_upper = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean_lower += t[j] * bounds.lower[j];
    mean_upper += t[j] * bounds.upper[j];
  }
  SandwichConstants c;
  c.alpha.resize(n);
  c.beta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(bounds.upper[i] - mean_lower);
    const double b = std::abs(bounds.lower[i] - mean_upper);
    c.alpha[i] = std::max(a, b);
    c.beta[i] = std::min(a, b);
    c.lower += t[i] * c.beta[i] * c.beta[i];
    c.upper += t[i] * c.alpha[i] * c.alpha[i];
  }
  return c;
}

CheckReport variance_bounds(const WeightedFamily& fam, const ScalarBounds& bounds, BoundsMode mode,
                            const CheckOptions& opts) {
  const std::size_t n = fam.size();
  if (bounds.lower.size() != n || bounds.upper.size() != n)
    throw Error(ErrorKind::BadBounds, "need one (m_i, M_i) pair per matrix");
  for (std::size_t i = 0; i < n; ++i) {
    const double m = bounds.lower[i];
    const double big_m = bounds.upper[i];
    if (!std::isfinite(m) || !std::isfinite(big_m) || m > big_m || (mode == BoundsMode::Strict && m < 0.0)) {
      std::ostringstream os;
      os << "bounds (" << m << ", " << big_m << ") at index " << i << " are invalid";
      throw Error(ErrorKind::BadBounds, os.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = fam.matrices()[i];
    const auto eig = hermitian_eig(a);
    const double slack = 1e-10 * (1.0 + operator_norm(a));
    const double lo = eig.eigenvalues(0);
    const double hi = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (lo < bounds.lower[i] - slack || hi > bounds.upper[i] + slack) {
      std::ostringstream os;
      os << "spectrum of A_" << i << " is [" << lo << ", " << hi << "], outside [" << bounds.lower[i] << ", "
         << bounds.upper[i] << "]";
      throw Error(ErrorKind::BoundsViolated, os.str());
    }
  }

  const ComplexMatrix d = variance_difference(fam);
  const auto c = sandwich_constants(fam.weights(), bounds);
  const auto identity = ComplexMatrix::Identity(fam.dim(), fam.dim());
  const double lower_margin = min_eigenvalue(d - c.lower * identity);
  const double upper_margin = min_eigenvalue(c.upper * identity - d);

  // Indices whose shifted interval [m_i - sum t M, M_i - sum t m] has 0 in its
  // interior: there A_i - mean may be singular, so beta_i^2 is not a lower bound.
  double mean_lower = 0.0;
  double mean_upper = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean_lower += fam.weights()[j] * bounds.lower[j];
    mean_upper += fam.weights()[j] * bounds.upper[j];
  }
  std::size_t straddling = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (bounds.lower[i] - mean_upper < 0.0 && bounds.upper[i] - mean_lower > 0.0) ++straddling;

  const double scale = fam.scale();
  auto report = CheckReport::margin("variance-bounds", std::min(lower_margin, upper_margin),
                                    1e-10 * scale * opts.tolerance_scale);
  report.with("lower_bound", c.lower)
      .with("upper_bound", c.upper)
      .with("lower_margin", lower_margin)
      .with("upper_margin", upper_margin)
      .with("straddling_indices", static_cast<double>(straddling))
      .with("scale", scale);
  return report;
}

CheckReport vector_variance_identity(const std::vector<Vector>& xs, const ProbabilityWeights& weights,
                                     const std::optional<Vector>& e, const CheckOptions& opts) {
  if (xs.empty()) throw Error(ErrorKind::BadWeights, "no vectors");
  if (xs.size() != weights.size()) throw Error(ErrorKind::BadWeights, "one weight per vector required");
  const auto dim = xs.front().size();
  for (const auto& x : xs)
    if (x.size() != dim) throw Error(ErrorKind::DimensionMismatch, "vectors differ in dimension");

  Vector mean = Vector::Zero(dim);
  for (std::size_t i = 0; i < xs.size(); ++i) mean += weights[i] * xs[i];

  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vector dev = xs[i] - mean;
    lhs += weights[i] * inner(dev, dev).real();
    const double sq = inner(xs[i], xs[i]).real();
    rhs += weights[i] * sq;
    scale += weights[i] * sq;
  }
  rhs -= inner(mean, mean).real();

  Vector probe = e.value_or(Vector::Unit(dim, 0));
  if (probe.size() != dim) throw Error(ErrorKind::DimensionMismatch, "embedding vector has the wrong dimension");
  const double probe_sq = inner(probe, probe).real();
  if (!(probe_sq > 0.0)) throw Error(ErrorKind::ZeroVector, "embedding vector must be nonzero");

  std::vector<ComplexMatrix> embedded;
  embedded.reserve(xs.size());
  for (const auto& x : xs) embedded.push_back(rank_one(x, probe));
  const auto sides = variance_sides(WeightedFamily(weights, std::move(embedded)));
  // |x (x) e|^2 = ||x||^2 e (x) e, so each side is s * (e (x) e) and <M e, e> = s ||e||^4.
  const double denom = probe_sq * probe_sq;
  const double lhs_embedded = inner(sides.lhs * probe, probe).real() / denom;
  const double rhs_embedded = inner(sides.rhs * probe, probe).real() / denom;

  const double direct_residual = std::abs(lhs - rhs);
  const double embedded_residual = sides.report.value / probe_sq;
  const double agreement = std::max(std::abs(lhs - lhs_embedded), std::abs(rhs - rhs_embedded));
  const double worst = std::max({direct_residual, embedded_residual, agreement});
  return CheckReport::residual("vector-identity", worst, 1e-11 * scale * opts.tolerance_scale)
      .with("lhs", lhs)
      .with("rhs", rhs)
      .with("lhs_embedded", lhs_embedded)
      .with("rhs_embedded", rhs_embedded)
      .with("direct_residual", direct_residual)
      .with("embedded_residual", embedded_residual)
      .with("agreement", agreement)
      .with("scale", scale);
}

CheckReport normalized_trace_identity(const ComplexMatrix& a, const CheckOptions& opts) {
  const Complex tr = trace(a);
  const double n = static_cast<double>(a.rows());
  const Complex normalized = tr / n;
  const auto identity = ComplexMatrix::Identity(a.rows(), a.cols());
  const double norm_a = schatten_norm(a, SchattenOrder::finite(2.0));
  const double centered = schatten_norm(a - normalized * identity, SchattenOrder::finite(2.0));
  const double lhs = centered * centered;
  const double rhs = norm_a * norm_a - n * std::norm(normalized);
  return CheckReport::residual("trace-identity", std::abs(lhs - rhs),
                               1e-10 * (1.0 + norm_a * norm_a) * opts.tolerance_scale)
      .with("lhs", lhs)
      .with("rhs", rhs)
      .with("normalized_trace_re", normalized.real())
      .with("normalized_trace_im", normalized.imag());
}

}  // namespace opvar

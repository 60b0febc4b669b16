#include "opvar/schatten.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "opvar/error.hpp"

namespace opvar {

SchattenOrder SchattenOrder::finite(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "Schatten order must satisfy 0 < p < inf, got " << p;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return SchattenOrder(p, false);
}

SchattenOrder SchattenOrder::parse(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "cannot parse Schatten order '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorKind::InvalidArgument, "cannot parse Schatten order '" + text + "'");
  if (std::isinf(p) && p > 0) return infinity();
  return finite(p);
}

double SchattenOrder::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : p_;
}

SchattenOrder SchattenOrder::half() const { return infinite_ ? infinity() : finite(p_ / 2.0); }

std::string SchattenOrder::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

RealVector singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

double schatten_power(const ComplexMatrix& a, SchattenOrder p) {
  if (p.is_infinite()) throw Error(ErrorKind::InvalidArgument, "schatten_power needs a finite order");
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 0.0;
  const double exponent = p.value();
  const double cut = p.is_quasi_norm() ? kSingularValueFloor * s(0) : 0.0;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) sum += std::pow(s(k), exponent);
  return sum;
}

double schatten_norm(const ComplexMatrix& a, SchattenOrder p) {
  if (p.is_infinite()) {
    const RealVector s = singular_values(a);
    return s.size() ? s(0) : 0.0;
  }
  return std::pow(schatten_power(a, p), 1.0 / p.value());
}

double q_norm(const ComplexMatrix& a, SchattenOrder p) {
  if (!p.q_norm_eligible())
    throw Error(ErrorKind::IneligibleQNorm, "Schatten order " + p.to_string() + " is not a Q-norm (needs p >= 2 or inf)");
  return schatten_norm(a, p);
}

double q_hat_norm(const ComplexMatrix& h, SchattenOrder p) {
  if (!p.q_norm_eligible())
    throw Error(ErrorKind::IneligibleQNorm, "Schatten order " + p.to_string() + " is not a Q-norm (needs p >= 2 or inf)");
  return schatten_norm(h, p.half());
}

CheckReport qnorm_power_identity_check(const ComplexMatrix& a, SchattenOrder p, double q, const CheckOptions& opts) {
  if (!(q > 0.0) || !std::isfinite(q)) throw Error(ErrorKind::InvalidArgument, "power q must be a positive real");
  const double lhs = std::pow(schatten_norm(a, p), q);
  const double rhs = std::pow(schatten_norm(abs_squared(a), p.half()), q / 2.0);
  const double tolerance = 1e-9 * (1.0 + lhs) * opts.tolerance_scale;
  return CheckReport::residual("qnorm-power-identity", std::abs(lhs - rhs), tolerance)
      .with("p", p.value())
      .with("q", q)
      .with("lhs", lhs)
      .with("rhs", rhs);
}

}  // namespace opvar

#pragma once

#include <string>

#include "opvar/linalg.hpp"
#include "opvar/report.hpp"

namespace opvar {

/// Schatten exponent p in (0, inf]. Infinity is stored explicitly.
class SchattenOrder {
 public:
  /// Throws InvalidArgument unless 0 < p < inf.
  static SchattenOrder finite(double p);
  static SchattenOrder infinity() { return SchattenOrder(0.0, true); }
  /// Accepts a positive real or "inf"/"infinity".
  static SchattenOrder parse(const std::string& text);

  bool is_infinite() const noexcept { return infinite_; }
  /// p, or +inf.
  double value() const noexcept;

  bool is_quasi_norm() const noexcept { return !infinite_ && p_ < 1.0; }
  bool is_norm() const noexcept { return !is_quasi_norm(); }
  bool q_norm_eligible() const noexcept { return infinite_ || p_ >= 2.0; }

  /// p/2, with inf/2 = inf. The companion order of the Q-norm.
  SchattenOrder half() const;

  std::string to_string() const;

  friend bool operator==(const SchattenOrder&, const SchattenOrder&) = default;

 private:
  SchattenOrder(double p, bool inf) : p_(p), infinite_(inf) {}
  double p_;
  bool infinite_;
};

/// Relative cut below which singular values count as zero under p < 1.
inline constexpr double kSingularValueFloor = 1e-13;

/// Nonincreasing, min(rows, cols) entries.
RealVector singular_values(const ComplexMatrix& a);

/// ||A||_p, or the largest singular value for p = inf.
double schatten_norm(const ComplexMatrix& a, SchattenOrder p);

/// ||A||_p^p = tr |A|^p for finite p, without the final root.
double schatten_power(const ComplexMatrix& a, SchattenOrder p);

/// ||A||_Q for the Schatten Q-norms (p >= 2 or inf). Throws IneligibleQNorm.
double q_norm(const ComplexMatrix& a, SchattenOrder p);
/// ||H||_Qhat, the companion norm: Schatten p/2.
double q_hat_norm(const ComplexMatrix& h, SchattenOrder p);

/// Compares ||A||_p^q with || |A|^2 ||_{p/2}^{q/2}; passes when the gap is
/// within 1e-9 (1 + ||A||_p^q).
CheckReport qnorm_power_identity_check(const ComplexMatrix& a, SchattenOrder p, double q,
                                       const CheckOptions& opts = {});

}  // namespace opvar

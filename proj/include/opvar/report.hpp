#pragma once

#include <string>
#include <utility>
#include <vector>

namespace opvar {

// Residual checks pass when value <= tolerance; margin checks pass when
// value >= -tolerance.
enum class CheckKind { Residual, Margin };

struct CheckReport {
  std::string name;
  CheckKind kind = CheckKind::Residual;
  double value = 0.0;  // residual or margin, per kind
  double tolerance = 0.0;
  bool passed = false;
  // Ordered so serialized output is stable.
  std::vector<std::pair<std::string, double>> details;

  static CheckReport residual(std::string name, double residual, double tolerance);
  static CheckReport margin(std::string name, double margin, double tolerance);

  CheckReport& with(std::string key, double v) {
    details.emplace_back(std::move(key), v);
    return *this;
  }

  // Returns the first detail named key, or fallback.
  double detail(const std::string& key, double fallback = 0.0) const;

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

}  // namespace opvar

namespace opvar {

// Every check multiplies its default tolerance by tolerance_scale.
struct CheckOptions {
  double tolerance_scale = 1.0;
};

}  // namespace opvar

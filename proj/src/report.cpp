#include "opvar/report.hpp"

#include <algorithm>

namespace opvar {

CheckReport CheckReport::residual(std::string name, double residual, double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.kind = CheckKind::Residual;
  r.value = residual;
  r.tolerance = tolerance;
  r.passed = residual <= tolerance;
  return r;
}

CheckReport CheckReport::margin(std::string name, double margin, double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.kind = CheckKind::Margin;
  r.value = margin;
  r.tolerance = tolerance;
  r.passed = margin >= -tolerance;
  return r;
}

double CheckReport::detail(const std::string& key, double fallback) const {
  auto it = std::find_if(details.begin(), details.end(), [&](const auto& kv) { return kv.first == key; });
  return it == details.end() ? fallback : it->second;
}

}  // namespace opvar

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opvar/ensembles.hpp"
#include "opvar/report.hpp"
#include "opvar/schatten.hpp"

namespace opvar {

struct TrialConfig {
  std::uint64_t seed = 0;
  int trials = 500;
  std::vector<int> dims{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> family_sizes{1, 2, 3, 4, 5, 6};
  std::vector<SchattenOrder> p_grid = default_p_grid();
  Ensemble ensemble = Ensemble::Ginibre;
  /// Range from which the diagonal-positive (m_i, M_i) are drawn.
  double bound_lo = 0.0;
  double bound_hi = 2.0;
  double tolerance_scale = 1.0;
  unsigned threads = 0;  // 0 = hardware concurrency

  static std::vector<SchattenOrder> default_p_grid();

  /// Throws InvalidArgument unless trials >= 1 and every grid is nonempty
  /// with positive entries.
  void validate() const;
};

struct TrialCheck {
  int trial = 0;
  CheckReport report;

  friend bool operator==(const TrialCheck&, const TrialCheck&) = default;
};

struct CheckSummary {
  std::string name;
  CheckKind kind = CheckKind::Residual;
  int count = 0;
  int failures = 0;
  double worst = 0.0;  // largest residual or smallest margin

  friend bool operator==(const CheckSummary&, const CheckSummary&) = default;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::string ensemble;
  std::vector<TrialCheck> checks;  // sorted by trial, then run order
  int passed = 0;
  int failed = 0;
  std::vector<CheckSummary> summaries;  // sorted by name

  bool all_passed() const noexcept { return failed == 0; }

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

/// Recomputes the counts and per-name summaries from `checks`.
void summarize(SuiteReport& report);

/// The checks one trial runs; exposed so a trial can be replayed alone.
std::vector<CheckReport> run_trial(const TrialConfig& cfg, int trial);

/// Deterministic in cfg: trials may run concurrently but are merged by index.
SuiteReport random_suite(const TrialConfig& cfg);

}  // namespace opvar

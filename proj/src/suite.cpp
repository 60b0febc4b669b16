#include "opvar/suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "opvar/error.hpp"
#include "opvar/inequalities.hpp"
#include "opvar/parallel.hpp"
#include "opvar/variance.hpp"

namespace opvar {

namespace {

std::string with_order(const std::string& name, SchattenOrder p) { return name + "[p=" + p.to_string() + "]"; }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& options) {
  std::uniform_int_distribution<std::size_t> index(0, options.size() - 1);
  return options[index(rng)];
}

}  // namespace

std::vector<SchattenOrder> TrialConfig::default_p_grid() {
  std::vector<SchattenOrder> grid;
  for (double p : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) grid.push_back(SchattenOrder::finite(p));
  grid.push_back(SchattenOrder::infinity());
  return grid;
}

void TrialConfig::validate() const {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (dims.empty() || family_sizes.empty() || p_grid.empty())
    throw Error(ErrorKind::InvalidArgument, "dims, family sizes and p grid must be nonempty");
  for (int d : dims)
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "dimensions must be positive");
  for (int n : family_sizes)
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "family sizes must be positive");
  if (!(bound_lo >= 0.0) || !(bound_hi >= bound_lo) || !std::isfinite(bound_hi))
    throw Error(ErrorKind::InvalidArgument, "bound range must satisfy 0 <= lo <= hi < inf");
  if (!(tolerance_scale >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance scale must be >= 0");
}

std::vector<CheckReport> run_trial(const TrialConfig& cfg, int trial) {
  Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(trial));
  const int dim = pick(rng, cfg.dims);
  int n = pick(rng, cfg.family_sizes);
  if (cfg.ensemble == Ensemble::OrthogonalRankOne) n = std::min(n, dim);
  const CheckOptions opts{cfg.tolerance_scale};

  std::vector<ComplexMatrix> as;
  ScalarBounds bounds;
  switch (cfg.ensemble) {
    case Ensemble::Ginibre:
      for (int i = 0; i < n; ++i) as.push_back(ginibre(rng, dim, dim));
      break;
    case Ensemble::Wishart:
      for (int i = 0; i < n; ++i) as.push_back(wishart(rng, dim));
      break;
    case Ensemble::DiagonalPositive: {
      std::uniform_real_distribution<double> range(cfg.bound_lo, cfg.bound_hi);
      for (int i = 0; i < n; ++i) {
        double m = range(rng);
        double big_m = range(rng);
        if (m > big_m) std::swap(m, big_m);
        bounds.lower.push_back(m);
        bounds.upper.push_back(big_m);
        as.push_back(diagonal_in_range(rng, dim, m, big_m));
      }
      break;
    }
    case Ensemble::OrthogonalRankOne:
      as = make_orthogonal_family(orthogonal_vectors(rng, dim, static_cast<std::size_t>(n)));
      break;
  }
  const auto weights = random_weights(rng, as.size());
  const WeightedFamily family(weights, as);

  std::vector<CheckReport> out;
  out.push_back(variance_sides(family, opts).report);
  out.push_back(am_qm_margin(family, opts));
  if (cfg.ensemble == Ensemble::DiagonalPositive) out.push_back(variance_bounds(family, bounds, BoundsMode::Strict, opts));
  for (const auto& p : cfg.p_grid) {
    if (p.is_infinite()) continue;
    if (is_psd_ensemble(cfg.ensemble)) {
      auto r = lemma_sum_bounds(as, p, opts);
      r.name = with_order(r.name, p);
      out.push_back(std::move(r));
    }
    auto tp = thm_pnorm_check(as, p, opts);
    tp.name = with_order(tp.name, p);
    out.push_back(std::move(tp));
    auto ts = thm_sqnorm_check(as, p, opts);
    ts.name = with_order(ts.name, p);
    out.push_back(std::move(ts));
  }
  if (cfg.ensemble == Ensemble::OrthogonalRankOne) {
    for (const auto& p : cfg.p_grid) {
      if (!p.q_norm_eligible()) continue;
      auto r = qnorm_orthogonal_check(as, weights, p, opts);
      r.name = with_order(r.name, p);
      out.push_back(std::move(r));
    }
  }
  for (auto& r : out) r.with("trial_dim", dim).with("trial_n", static_cast<double>(as.size()));
  return out;
}

void summarize(SuiteReport& report) {
  report.passed = 0;
  report.failed = 0;
  std::map<std::string, CheckSummary> by_name;
  for (const auto& tc : report.checks) {
    const auto& r = tc.report;
    (r.passed ? report.passed : report.failed)++;
    auto [it, fresh] = by_name.try_emplace(r.name);
    auto& s = it->second;
    if (fresh) {
      s.name = r.name;
      s.kind = r.kind;
      s.worst = r.value;
    }
    ++s.count;
    if (!r.passed) ++s.failures;
    s.worst = r.kind == CheckKind::Residual ? std::max(s.worst, r.value) : std::min(s.worst, r.value);
  }
  report.summaries.clear();
  for (auto& [name, s] : by_name) report.summaries.push_back(std::move(s));
}

SuiteReport random_suite(const TrialConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<CheckReport>> per_trial(static_cast<std::size_t>(cfg.trials));
  parallel_for(per_trial.size(), [&](std::size_t i) { per_trial[i] = run_trial(cfg, static_cast<int>(i)); },
               cfg.threads);

  SuiteReport report;
  report.seed = cfg.seed;
  report.ensemble = to_string(cfg.ensemble);
  for (std::size_t i = 0; i < per_trial.size(); ++i)
    for (auto& r : per_trial[i]) report.checks.push_back({static_cast<int>(i), std::move(r)});
  summarize(report);
  return report;
}

}  // namespace opvar

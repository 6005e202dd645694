#include "rmc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rmc/bounds.hpp"
#include "rmc/parallel.hpp"

namespace rmc {

Interval wilson_interval(std::int64_t pass, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(pass) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SamplingPattern sample_uniform_pattern(int d, int N, int l, std::uint64_t seed) {
  if (l < 0 || l > d) throw PreconditionError("per-column count must lie in [0, d]");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(N));
  std::vector<int> rows(static_cast<std::size_t>(d));
  for (auto& col : columns) {
    for (int i = 0; i < d; ++i) rows[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < l; ++i) {
      std::uniform_int_distribution<int> pick(i, d - 1);
      std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(pick(rng))]);
    }
    col.assign(rows.begin(), rows.begin() + l);
  }
  return SamplingPattern::from_columns(d, std::move(columns));
}

TrialOutcome estimate_pass_probability(const TrialConfig& cfg, const RobustOptions& options) {
  if (cfg.trials < 1) throw PreconditionError("trials must be positive");
  if (cfg.l < 0 || cfg.l > cfg.d) throw PreconditionError("per-column count must lie in [0, d]");
  enum class Result : int { Pass, Premise, Refuted, Indeterminate };
  std::vector<Result> results(static_cast<std::size_t>(cfg.trials));
  RobustOptions inner = options;
  inner.threads = 1;
  parallel_for(0, cfg.trials, options.threads, [&](std::int64_t t) {
    const auto pattern = sample_uniform_pattern(cfg.d, cfg.N, cfg.l, mix_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    const auto v = cfg.target == Target::Finite ? verify_finite(pattern, cfg.r, cfg.budget, inner)
                                                : verify_unique(pattern, cfg.r, cfg.budget, inner);
    Result res = Result::Pass;
    if (!v.positive()) {
      res = v.premise_violated                            ? Result::Premise
            : v.verdict == RobustOutcome::Indeterminate ? Result::Indeterminate
                                                        : Result::Refuted;
    }
    results[static_cast<std::size_t>(t)] = res;
  });

  TrialOutcome out;
  out.l = cfg.l;
  out.trial_count = cfg.trials;
  for (Result res : results) {
    switch (res) {
      case Result::Pass: ++out.pass_count; break;
      case Result::Premise: ++out.failure_reasons["premise"]; break;
      case Result::Refuted: ++out.failure_reasons["refuted"]; break;
      case Result::Indeterminate: ++out.failure_reasons["indeterminate"]; break;
    }
  }
  out.point_estimate = static_cast<double>(out.pass_count) / static_cast<double>(out.trial_count);
  out.confidence_interval = wilson_interval(out.pass_count, out.trial_count);
  return out;
}

ThresholdResult empirical_threshold(int d, int N, int r, NoiseBudget budget, double epsilon, int trials,
                                    std::uint64_t seed, Target target, const RobustOptions& options) {
  BoundQuery q;
  q.d = d;
  q.N = N;
  q.r = r;
  q.epsilon = epsilon;
  q.budget = budget;
  ThresholdResult out;
  out.theory_l_min = compute_bound(q).l_min;
  out.theory_capped = std::min<std::int64_t>(d, out.theory_l_min);

  const RemovalPlan plan = target == Target::Finite ? finite_plan(r, budget) : unique_plan(r, budget);
  const int floor = std::max(0, plan.min_observed);
  for (int l = floor; l <= d; ++l) {
    TrialConfig cfg;
    cfg.d = d;
    cfg.N = N;
    cfg.r = r;
    cfg.l = l;
    cfg.budget = budget;
    cfg.trials = trials;
    cfg.seed = mix_seed(seed, static_cast<std::uint64_t>(l));
    cfg.target = target;
    out.outcomes.push_back(estimate_pass_probability(cfg, options));
    if (!out.empirical_l && out.outcomes.back().point_estimate >= 1.0 - epsilon) out.empirical_l = l;
  }
  return out;
}

}  // namespace rmc

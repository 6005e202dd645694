// Monte Carlo harness: sample uniform per-column patterns and run the
// deterministic verifier on each.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmc/robust.hpp"

namespace rmc {

enum class Target { Finite, Unique };

struct TrialConfig {
  int d = 0;
  int N = 0;
  int r = 1;
  int l = 0;  // observed rows per column, sampled without replacement
  NoiseBudget budget;
  int trials = 1;
  std::uint64_t seed = 0x5eedULL;
  Target target = Target::Finite;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for pass / trials at normal quantile z.
Interval wilson_interval(std::int64_t pass, std::int64_t trials, double z = 1.959963984540054);

struct TrialOutcome {
  int l = 0;
  std::int64_t pass_count = 0;
  std::int64_t trial_count = 0;
  double point_estimate = 0.0;
  Interval confidence_interval;
  std::map<std::string, std::int64_t> failure_reasons;  // premise / refuted / indeterminate
};

/// d x N pattern with exactly l distinct uniformly chosen rows per column.
SamplingPattern sample_uniform_pattern(int d, int N, int l, std::uint64_t seed);

/// Runs cfg.trials independent trials. Trial t uses the stream
/// mix_seed(cfg.seed, t), so results do not depend on the thread count.
/// Indeterminate verdicts count as failures.
TrialOutcome estimate_pass_probability(const TrialConfig& cfg, const RobustOptions& options = {});

struct ThresholdResult {
  std::optional<int> empirical_l;  // nullopt: even l = d misses 1 - eps
  std::int64_t theory_l_min = 0;   // uncapped
  std::int64_t theory_capped = 0;  // min(d, theory_l_min)
  std::vector<TrialOutcome> outcomes;  // one per scanned l, ascending
};

/// Lowest premise-admissible l whose pass estimate reaches 1 - eps. Scans
/// every l from the premise floor to d so the whole curve is available.
/// Each l uses seed mix_seed(seed, l).
ThresholdResult empirical_threshold(int d, int N, int r, NoiseBudget budget, double epsilon, int trials,
                                    std::uint64_t seed, Target target = Target::Finite,
                                    const RobustOptions& options = {});

}  // namespace rmc

// Rank ceiling r* of a sampling pattern and the rank dichotomy built on it.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmc/bounds.hpp"
#include "rmc/numeric.hpp"
#include "rmc/robust.hpp"

namespace rmc {

struct RankCeiling {
  int r_star = 0;
  NoiseBudget budget;
  std::vector<std::pair<int, RobustVerdict>> per_rank;  // r = 1 .. stop
  /// False when an Indeterminate verdict ended (or occurred during) the scan.
  bool exact = true;
};

/// Ascending scan r = 1, 2, ... of verify_finite. Stops at the first
/// non-positive verdict; r_star is the last positive rank before it. No
/// monotonicity in r is assumed, every visited rank is recorded.
RankCeiling estimate_rank_ceiling(const SamplingPattern& pattern, NoiseBudget budget,
                                  const RobustOptions& options = {});

enum class DichotomyAlternative {
  RankAtMost,     // (i): the true rank lies in {1, .., r'}
  NoLowRankFit,   // (ii): every valid completion has rank > r'
};

struct DichotomyReport {
  int r_prime = 0;
  int r_star = 0;
  bool exact = true;
  std::optional<int> completion_rank;
  DichotomyAlternative alternative = DichotomyAlternative::NoLowRankFit;
  std::string statement;
};

/// `completion_rank` is the lowest rank at which a valid completion was
/// found by an ascending search, or nullopt when the search over 1..r' found
/// none. Throws PreconditionError unless 1 <= r' <= r_star.
DichotomyReport rank_dichotomy(const RankCeiling& ceiling, int r_prime, std::optional<int> completion_rank);

/// Lowest rank in 1..max_rank at which the observations, minus at most s
/// cells, admit a rank fit. nullopt when none does.
std::optional<int> lowest_valid_completion(const Observations& observations, int max_rank, int s,
                                           const SupportSearchOptions& options = {});

struct RankPremise {
  bool holds = false;
  bool n_ok = false;         // r'(d - r') <= N
  std::optional<bool> l_ok;  // when a per-column count was supplied
  BoundResult bound;
};

/// Column-wise sampling condition with r replaced by r'; with `l` given, also
/// checks that count against it.
RankPremise probabilistic_rank_premise(int d, std::int64_t N, double epsilon, int g, int r_prime,
                                       std::optional<std::int64_t> l = std::nullopt);

}  // namespace rmc

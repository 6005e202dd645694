#include "rmc/rank.hpp"

namespace rmc {

RankCeiling estimate_rank_ceiling(const SamplingPattern& pattern, NoiseBudget budget, const RobustOptions& options) {
  RankCeiling out;
  out.budget = budget;
  for (int r = 1;; ++r) {
    auto verdict = verify_finite(pattern, r, budget, options);
    const bool positive = verdict.positive();
    const bool indeterminate = verdict.verdict == RobustOutcome::Indeterminate;
    out.per_rank.emplace_back(r, std::move(verdict));
    if (!positive) {
      if (indeterminate) out.exact = false;
      break;
    }
    out.r_star = r;
    // Past r = d every column fails the per-column premise.
    if (r > pattern.rows()) break;
  }
  return out;
}

DichotomyReport rank_dichotomy(const RankCeiling& ceiling, int r_prime, std::optional<int> completion_rank) {
  if (r_prime < 1 || r_prime > ceiling.r_star) {
    throw PreconditionError("r' = " + std::to_string(r_prime) + " lies outside {1, .., r*} with r* = " +
                            std::to_string(ceiling.r_star) + "; no statement can be made");
  }
  DichotomyReport rep;
  rep.r_prime = r_prime;
  rep.r_star = ceiling.r_star;
  rep.exact = ceiling.exact;
  rep.completion_rank = completion_rank;
  const std::string rp = std::to_string(r_prime);
  if (completion_rank && *completion_rank <= r_prime) {
    rep.alternative = DichotomyAlternative::RankAtMost;
    rep.statement = "alternative (i): a valid completion of rank " + std::to_string(*completion_rank) +
                    " exists, so with probability one the true rank r satisfies r <= " + rp +
                    " (numerically supported)";
  } else {
    rep.alternative = DichotomyAlternative::NoLowRankFit;
    rep.statement = "alternative (ii): no valid completion of rank in {1, .., " + rp +
                    "} was found; every completion has rank > " + rp + " (numerically supported)";
  }
  if (!ceiling.exact) rep.statement += "; contiguity of {1, .., r*} is unverified (indeterminate verdicts)";
  return rep;
}

std::optional<int> lowest_valid_completion(const Observations& observations, int max_rank, int s,
                                           const SupportSearchOptions& options) {
  for (int q = 1; q <= max_rank; ++q) {
    try {
      identify_noise_support(observations, q, s, options);
      return q;
    } catch (const NoSupportFound&) {
    }
  }
  return std::nullopt;
}

RankPremise probabilistic_rank_premise(int d, std::int64_t N, double epsilon, int g, int r_prime,
                                       std::optional<std::int64_t> l) {
  BoundQuery q;
  q.d = d;
  q.N = N;
  q.r = r_prime;
  q.epsilon = epsilon;
  q.budget = NoiseBudget::per_column(g);
  RankPremise out;
  out.bound = columnwise_noise_bound(q);
  out.n_ok = static_cast<std::int64_t>(r_prime) * (d - r_prime) <= N;
  if (l) {
    out.l_ok = bound_holds(q, *l);
    out.holds = out.n_ok && *out.l_ok;
  } else {
    out.holds = out.n_ok && out.bound.feasible;
  }
  return out;
}

}  // namespace rmc

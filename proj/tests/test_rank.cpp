#include <doctest.h>

#include "rmc/rank.hpp"

using namespace rmc;

TEST_CASE("rank ceiling of fully observed patterns") {
  const auto c = estimate_rank_ceiling(SamplingPattern::full(4, 12), NoiseBudget::global(0));
  CHECK(c.r_star >= 3);
  CHECK(c.exact);
  CHECK(static_cast<int>(c.per_rank.size()) >= c.r_star);
  for (const auto& [r, v] : c.per_rank) {
    if (r <= c.r_star) {
      CHECK(v.verdict == RobustOutcome::FinitelyCompletable);
      CHECK(verify_finite(SamplingPattern::full(4, 12), r, NoiseBudget::global(0)).verdict == v.verdict);
    }
  }
}

TEST_CASE("rank ceiling stops at the first failure") {
  // Two columns on four rows: r = 1 needs 3 origins.
  const auto c = estimate_rank_ceiling(SamplingPattern::full(4, 2), NoiseBudget::global(0));
  CHECK(c.r_star == 0);
  REQUIRE(c.per_rank.size() == 1);
  CHECK(c.per_rank[0].second.verdict == RobustOutcome::Refuted);

  const auto one = estimate_rank_ceiling(SamplingPattern::from_columns(3, {{0}, {0, 1, 2}, {1, 2}}),
                                         NoiseBudget::global(0));
  CHECK(one.r_star == 1);
  CHECK(one.per_rank.back().first == 2);
}

TEST_CASE("rank ceiling with noise") {
  const auto c = estimate_rank_ceiling(SamplingPattern::full(4, 12), NoiseBudget::global(1));
  CHECK(c.r_star >= 1);
  const auto n = estimate_rank_ceiling(SamplingPattern::full(4, 12), NoiseBudget::global(0));
  CHECK(c.r_star <= n.r_star);
}

TEST_CASE("rank ceiling reports indeterminate scans") {
  RobustOptions opts;
  opts.search.node_budget = 1;
  const auto c = estimate_rank_ceiling(SamplingPattern::full(5, 12), NoiseBudget::global(0), opts);
  CHECK_FALSE(c.exact);
}

TEST_CASE("dichotomy statements") {
  RankCeiling c;
  c.r_star = 3;
  const auto i = rank_dichotomy(c, 2, 2);
  CHECK(i.alternative == DichotomyAlternative::RankAtMost);
  CHECK(i.statement.find("numerically supported") != std::string::npos);
  const auto ii = rank_dichotomy(c, 2, std::nullopt);
  CHECK(ii.alternative == DichotomyAlternative::NoLowRankFit);
  const auto above = rank_dichotomy(c, 2, 3);
  CHECK(above.alternative == DichotomyAlternative::NoLowRankFit);
  CHECK_THROWS_AS(rank_dichotomy(c, 4, 2), PreconditionError);
  CHECK_THROWS_AS(rank_dichotomy(c, 0, 2), PreconditionError);
}

TEST_CASE("planted rank-3 data exercises both alternatives") {
  const auto inst = generate_instance(6, 18, 3, NoiseBudget::global(0), true, 9);
  const auto obs = inst.observations();
  const auto ceiling = estimate_rank_ceiling(obs.pattern(), NoiseBudget::global(0));
  REQUIRE(ceiling.r_star >= 3);
  const auto low = lowest_valid_completion(obs, 3, 0);
  REQUIRE(low.has_value());
  CHECK(*low == 3);
  CHECK(rank_dichotomy(ceiling, 3, low).alternative == DichotomyAlternative::RankAtMost);
  CHECK_FALSE(lowest_valid_completion(obs, 2, 0).has_value());
  CHECK(rank_dichotomy(ceiling, 2, lowest_valid_completion(obs, 2, 0)).alternative ==
        DichotomyAlternative::NoLowRankFit);
}

TEST_CASE("probabilistic rank premise delegates to the column-wise bound") {
  for (int rp : {1, 5, 20}) {
    const auto prem = probabilistic_rank_premise(600, 60000, 0.01, 1, rp);
    BoundQuery q;
    q.d = 600;
    q.N = 60000;
    q.r = rp;
    q.epsilon = 0.01;
    q.budget = NoiseBudget::per_column(1);
    CHECK(prem.bound.l_min == columnwise_noise_bound(q).l_min);
    CHECK(prem.n_ok);
  }
  CHECK_FALSE(probabilistic_rank_premise(600, 100, 0.01, 1, 5).n_ok);
  CHECK_FALSE(probabilistic_rank_premise(600, 100, 0.01, 1, 5).holds);
  const auto at = probabilistic_rank_premise(600, 60000, 0.01, 1, 10, 275);
  CHECK(at.l_ok == true);
  CHECK(probabilistic_rank_premise(600, 60000, 0.01, 1, 10, 274).l_ok == false);

  std::int64_t prev = 0;
  for (int rp = 1; rp <= 100; ++rp) {
    const auto l = probabilistic_rank_premise(600, 60000, 0.01, 2, rp).bound.l_min;
    CHECK(l >= prev);
    prev = l;
  }
}

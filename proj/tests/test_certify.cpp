#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rmc/certify.hpp"

using namespace rmc;

namespace {

ConstraintMatrix matrix_of(int d, int r, std::vector<std::vector<int>> cols) {
  ConstraintMatrix cm;
  cm.rows = d;
  cm.rank = r;
  int origin = 0;
  for (auto& rows : cols) {
    cm.columns.push_back({origin++, rows.back(), rows});
  }
  return cm;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Random constraint matrix: `n` columns with r+1 random rows each, origins in [0, origins).
ConstraintMatrix random_matrix(int d, int r, int n, int origins, std::mt19937_64& rng) {
  ConstraintMatrix cm;
  cm.rows = d;
  cm.rank = r;
  std::vector<int> all = iota_vec(d);
  for (int c = 0; c < n; ++c) {
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> rows(all.begin(), all.begin() + r + 1);
    std::sort(rows.begin(), rows.end());
    cm.columns.push_back({static_cast<int>(rng() % static_cast<unsigned>(origins)), rows.back(), rows});
  }
  return cm;
}

}  // namespace

TEST_CASE("min_slack of a single column is r - 1 under k = r") {
  for (int r = 1; r <= 4; ++r) {
    std::vector<int> rows = iota_vec(r + 1);
    const auto cm = matrix_of(r + 2, r, {rows});
    const std::vector<int> s{0};
    CHECK(min_slack(cm, s, CountCondition::finite(r)) == r - 1);
  }
}

TEST_CASE("duplicate columns violate the k = 1 condition") {
  const auto cm = matrix_of(3, 1, {{0, 1}, {0, 1}});
  const std::vector<int> s{0, 1};
  CHECK(min_slack(cm, s, CountCondition::unique(1)) == -1);
  CHECK(oracle::exhaustive_min_slack(cm, s, CountCondition::unique(1)) == -1);
}

TEST_CASE("min_slack rejects an empty subset") {
  const auto cm = matrix_of(3, 1, {{0, 1}});
  CHECK_THROWS(min_slack(cm, std::vector<int>{}, CountCondition::finite(1)));
}

TEST_CASE("min_slack agrees with exhaustive enumeration on random 6x8 sets") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int r = 1 + static_cast<int>(trial % 3);
    const auto cm = random_matrix(6, r, 8, 8, rng);
    const auto all = iota_vec(8);
    for (auto cond : {CountCondition::finite(r), CountCondition::unique(r)}) {
      CHECK(min_slack(cm, all, cond) == oracle::exhaustive_min_slack(cm, all, cond));
    }
  }
}

TEST_CASE("min_slack is non-increasing as columns are added") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + static_cast<int>(trial % 3);
    const auto cm = random_matrix(7, r, 10, 10, rng);
    std::vector<int> s;
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (int c = 0; c < cm.size(); ++c) {
      s.push_back(c);
      const auto v = min_slack(cm, s, CountCondition::finite(r));
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("anchored minimiser and circuits") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(trial % 2);
    const auto cm = random_matrix(5, r, 7, 7, rng);
    const auto cond = CountCondition::unique(r);
    const auto others = iota_vec(6);
    const auto a = anchored_slack(cm, others, 6, cond);
    REQUIRE(std::find(a.minimizer.begin(), a.minimizer.end(), 6) != a.minimizer.end());
    CHECK(oracle::exhaustive_min_slack(cm, a.minimizer, cond) <= a.slack);

    // Build a maximal independent prefix and check circuits against the definition.
    std::vector<int> indep;
    for (int c = 0; c < cm.size(); ++c) {
      auto circuit = find_circuit(cm, indep, c, cond);
      std::vector<int> grown = indep;
      grown.push_back(c);
      if (!circuit) {
        CHECK(oracle::passes(cm, grown, cond));
        indep = grown;
        continue;
      }
      CHECK_FALSE(oracle::passes(cm, grown, cond));
      CHECK_FALSE(oracle::passes(cm, *circuit, cond));
      for (std::size_t drop = 0; drop < circuit->size(); ++drop) {
        auto sub = *circuit;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
        CHECK(oracle::passes(cm, sub, cond));
      }
    }
    CHECK(count_rank(cm, iota_vec(cm.size()), cond) == static_cast<int>(indep.size()));
  }
}

TEST_CASE("finite certificate examples") {
  const auto two = build_constraint_matrix(SamplingPattern::full(3, 2), 1);
  const auto cert = find_finite_certificate(two, 1);
  REQUIRE(cert.verdict == CertificateVerdict::Finite);
  REQUIRE(cert.finite_witness->size() == 2);
  CHECK(two.origin((*cert.finite_witness)[0]) != two.origin((*cert.finite_witness)[1]));
  CHECK(check_certificate(two, 1, cert).empty());

  const auto one = build_constraint_matrix(SamplingPattern::full(3, 1), 1);
  const auto refuted = find_finite_certificate(one, 1);
  CHECK(refuted.verdict == CertificateVerdict::Refuted);
  REQUIRE(refuted.refutation.has_value());
  CHECK(refuted.refutation->kind == Refutation::Kind::OriginShortage);
  CHECK(check_certificate(one, 1, refuted).empty());

  const auto sparse = build_constraint_matrix(SamplingPattern::from_columns(4, {{0}, {1, 2}, {3}}), 2);
  CHECK(sparse.size() == 0);
  CHECK(find_finite_certificate(sparse, 2).verdict == CertificateVerdict::Refuted);
}

TEST_CASE("unique certificate examples") {
  const auto four = build_constraint_matrix(SamplingPattern::full(3, 4), 1);
  const auto cert = find_unique_certificate(four, 1);
  REQUIRE(cert.verdict == CertificateVerdict::Unique);
  CHECK(cert.finite_witness->size() == 2);
  CHECK(cert.unique_witness->size() == 2);
  CHECK(check_certificate(four, 1, cert).empty());

  const auto three = build_constraint_matrix(SamplingPattern::full(3, 3), 1);
  const auto no = find_unique_certificate(three, 1);
  CHECK(no.verdict == CertificateVerdict::Refuted);
  CHECK(check_certificate(three, 1, no).empty());
}

TEST_CASE("rank larger than the row count is refuted") {
  const auto cm = build_constraint_matrix(SamplingPattern::full(3, 5), 4);
  const auto cert = find_finite_certificate(cm, 4);
  CHECK(cert.verdict == CertificateVerdict::Refuted);
  CHECK(cert.refutation->kind == Refutation::Kind::RankTooLarge);
}

TEST_CASE("full rank needs no witness columns") {
  const auto cm = build_constraint_matrix(SamplingPattern::full(3, 2), 3);
  const auto cert = find_finite_certificate(cm, 3);
  CHECK(cert.verdict == CertificateVerdict::Finite);
  CHECK(cert.finite_witness->empty());
}

TEST_CASE("fully observed patterns are finitely completable when N >= r(d-r)") {
  for (int d = 2; d <= 6; ++d) {
    for (int r = 1; r <= std::min(3, d - 1); ++r) {
      const int n = r * (d - r);
      const auto cm = build_constraint_matrix(SamplingPattern::full(d, n), r);
      CHECK(find_finite_certificate(cm, r).verdict == CertificateVerdict::Finite);
      if (n > 1) {
        const auto short_cm = build_constraint_matrix(SamplingPattern::full(d, n - 1), r);
        CHECK(find_finite_certificate(short_cm, r).verdict == CertificateVerdict::Refuted);
      }
    }
  }
}

TEST_CASE("search strategies agree with the brute-force oracle") {
  std::mt19937_64 rng(77);
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 3);
    const int r = 1 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto p = oracle::random_pattern(d, n, 0.7, rng);
    const auto cm = build_constraint_matrix(p, r);
    if (cm.size() > 14) continue;

    SearchOptions mi, bt;
    bt.strategy = SearchStrategy::Backtracking;
    const auto f1 = find_finite_certificate(cm, r, mi);
    const auto f2 = find_finite_certificate(cm, r, bt);
    const bool expect_f = oracle::finite_exists(cm, r);
    CHECK(f1.positive() == expect_f);
    CHECK(f2.positive() == expect_f);
    CHECK(check_certificate(cm, r, f1).empty());
    CHECK(check_certificate(cm, r, f2).empty());

    const auto u1 = find_unique_certificate(cm, r, mi);
    const auto u2 = find_unique_certificate(cm, r, bt);
    const bool expect_u = oracle::unique_exists(cm, r);
    CHECK(u1.positive() == expect_u);
    CHECK(u2.positive() == expect_u);
    CHECK(check_certificate(cm, r, u1).empty());
    CHECK(check_certificate(cm, r, u2).empty());
    (expect_f ? positives : negatives)++;
  }
  CHECK(positives > 20);
  CHECK(negatives > 20);
}

TEST_CASE("rank-bound refutations are independently checkable") {
  std::mt19937_64 rng(8);
  int seen = 0;
  for (int trial = 0; trial < 400 && seen < 30; ++trial) {
    const int d = 4 + static_cast<int>(rng() % 2);
    const int r = 1 + static_cast<int>(rng() % 2);
    const auto p = oracle::random_pattern(d, r * (d - r) + 2, 0.55, rng);
    const auto cm = build_constraint_matrix(p, r);
    const auto cert = find_finite_certificate(cm, r);
    if (cert.verdict != CertificateVerdict::Refuted || cert.refutation->kind != Refutation::Kind::RankBound) continue;
    ++seen;
    const auto& ref = *cert.refutation;
    // Recompute the bound: origins outside U plus the brute-force rank of U.
    std::set<int> outside;
    for (int c = 0; c < cm.size(); ++c) {
      if (std::find(ref.finite_part.begin(), ref.finite_part.end(), c) == ref.finite_part.end()) {
        outside.insert(cm.origin(c));
      }
    }
    int rank_u = 0;
    const int u = static_cast<int>(ref.finite_part.size());
    REQUIRE(u <= 16);
    for (std::uint32_t mask = 0; mask < (1u << u); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < u; ++i) {
        if (mask & (1u << i)) s.push_back(ref.finite_part[static_cast<std::size_t>(i)]);
      }
      if (oracle::passes(cm, s, CountCondition::finite(r))) rank_u = std::max(rank_u, static_cast<int>(s.size()));
    }
    CHECK(static_cast<int>(outside.size()) + rank_u == ref.bound);
    CHECK(ref.bound < r * (d - r));

    Certificate forged = cert;
    forged.refutation->bound += 1;
    CHECK_FALSE(check_certificate(cm, r, forged).empty());
  }
  CHECK(seen > 0);
}

TEST_CASE("check_certificate catches bad witnesses") {
  const auto cm = build_constraint_matrix(SamplingPattern::full(3, 4), 1);
  Certificate c;
  c.verdict = CertificateVerdict::Finite;
  c.finite_witness = std::vector<int>{0, 1};  // same origin
  CHECK_FALSE(check_certificate(cm, 1, c).empty());
  c.finite_witness = std::vector<int>{0};  // wrong size
  CHECK_FALSE(check_certificate(cm, 1, c).empty());
  c.finite_witness = std::vector<int>{0, 2};  // both {0,1}
  CHECK_FALSE(check_certificate(cm, 1, c).empty());
  c.finite_witness = std::vector<int>{0, 3};
  CHECK(check_certificate(cm, 1, c).empty());
}

TEST_CASE("search budget exhaustion is indeterminate") {
  const auto cm = build_constraint_matrix(SamplingPattern::full(6, 12), 2);
  SearchOptions tiny;
  tiny.node_budget = 2;
  const auto cert = find_finite_certificate(cm, 2, tiny);
  CHECK(cert.verdict == CertificateVerdict::Indeterminate);
  CHECK_FALSE(cert.note.empty());
}

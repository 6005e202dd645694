#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rmc/bounds.hpp"

using namespace rmc;

namespace {

BoundQuery query(int d, int r, double eps, std::optional<NoiseBudget> budget = std::nullopt) {
  BoundQuery q;
  q.d = d;
  q.r = r;
  q.epsilon = eps;
  q.budget = budget;
  return q;
}

// The bound must hold at l_min and fail just below.
void check_tight(const BoundQuery& q, const BoundResult& b) {
  CHECK(bound_holds(q, b.l_min));
  CHECK_FALSE(bound_holds(q, b.l_min - 1));
}

}  // namespace

TEST_CASE("noiseless spot values") {
  // 12 ln(60000) + 12 = 144.025...
  const auto q = query(600, 10, 0.01);
  const auto b = noiseless_bound(q);
  CHECK(b.l_min == 145);
  CHECK(b.binding == "12log(d/eps)+12");
  CHECK(b.rhs == doctest::Approx(12.0 * std::log(60000.0) + 12.0));
  CHECK(b.feasible);
  check_tight(q, b);

  const auto q2 = query(600, 100, 0.01);
  const auto b2 = noiseless_bound(q2);
  CHECK(b2.l_min == 201);
  CHECK(b2.binding == "2r");
  check_tight(q2, b2);
}

TEST_CASE("noiseless bound grows as epsilon shrinks") {
  for (int r : {1, 10, 50}) {
    CHECK(noiseless_bound(query(600, r, 0.001)).l_min >= noiseless_bound(query(600, r, 0.01)).l_min);
  }
}

TEST_CASE("global-noise bound") {
  const auto q = query(600, 5, 0.01, NoiseBudget::global(2));
  const auto b = global_noise_bound(q);
  check_tight(q, b);
  CHECK(b.l_min > 12 * (5 + 2 + 1));

  for (int r : {1, 5, 20, 80}) {
    const auto base = noiseless_bound(query(600, r, 0.01)).l_min;
    std::int64_t prev = 0;
    for (int s = 0; s <= 4; ++s) {
      const auto qs = query(600, r, 0.01, NoiseBudget::global(s));
      const auto bs = global_noise_bound(qs);
      check_tight(qs, bs);
      CHECK(bs.l_min >= base);
      CHECK(bs.l_min >= prev);
      prev = bs.l_min;
    }
  }
}

TEST_CASE("column-wise bound") {
  // Recomputed by direct scan: l - 24 ln(l/2) first exceeds 12(ln 60000 + 2) at l = 275.
  const auto q = query(600, 10, 0.01, NoiseBudget::per_column(1));
  const auto b = columnwise_noise_bound(q);
  CHECK(b.l_min == 275);
  CHECK(b.binding == "12(log(d/eps)+g+1)");
  const double rhs = 12.0 * (std::log(60000.0) + 2.0);
  CHECK(275.0 - 24.0 * std::log(275.0 / 2.0) > rhs);
  CHECK_FALSE(274.0 - 24.0 * std::log(274.0 / 2.0) > rhs);
  check_tight(q, b);

  for (int r : {1, 10, 60}) {
    CHECK(columnwise_noise_bound(query(600, r, 0.01, NoiseBudget::per_column(0))).l_min >=
          noiseless_bound(query(600, r, 0.01)).l_min);
  }
}

TEST_CASE("binding branches of the noisy bounds") {
  const auto b = columnwise_noise_bound(query(600, 100, 0.01, NoiseBudget::per_column(1)));
  CHECK(b.binding == "2r");
  const auto c = columnwise_noise_bound(query(600, 10, 0.01, NoiseBudget::per_column(30)));
  CHECK(c.binding == "12(log(d/eps)+g+1)");
  const auto g = global_noise_bound(query(600, 3, 0.01, NoiseBudget::global(1)));
  CHECK(g.binding == "12(log(d/eps)+r+s+1)");
}

TEST_CASE("infeasible bounds are reported, not clamped") {
  const auto b = columnwise_noise_bound(query(50, 5, 0.01, NoiseBudget::per_column(2)));
  CHECK(b.l_min > 50);
  CHECK_FALSE(b.feasible);
}

TEST_CASE("N requirements and premise") {
  auto q = query(600, 10, 0.01);
  q.N = 60000;
  const auto b = compute_bound(q);
  CHECK(b.finite_N_ok == true);
  CHECK(b.unique_N_ok == true);
  CHECK(b.premise_ok);
  q.N = 10 * 590 - 1;
  CHECK(compute_bound(q).finite_N_ok == false);
  q.r = 101;
  CHECK_FALSE(compute_bound(q).premise_ok);
}

TEST_CASE("query validation") {
  CHECK_THROWS_AS(validate(query(600, 10, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(query(600, 10, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(validate(query(600, 0, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(validate(query(0, 1, 0.1)), std::invalid_argument);
}

TEST_CASE("log base is configurable") {
  auto q = query(600, 10, 0.01);
  q.log_base = 10.0;
  const auto b = noiseless_bound(q);
  CHECK(b.l_min == static_cast<std::int64_t>(std::floor(12.0 * std::log10(60000.0) + 12.0)) + 1);
  check_tight(q, b);
}

TEST_CASE("sweep ordering and self-consistency") {
  const auto rows = sweep(600, 60000, 0.01, 1, 100, {2, -1, 1});
  REQUIRE(rows.size() == 300);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& n = rows[i];
    const auto& g1 = rows[100 + i];
    const auto& g2 = rows[200 + i];
    CHECK(n.g == -1);
    CHECK(g1.g == 1);
    CHECK(g2.g == 2);
    CHECK(n.r == static_cast<int>(i) + 1);
    CHECK(g2.portion >= g1.portion);
    CHECK(g1.portion >= n.portion);
    CHECK(n.portion == doctest::Approx(static_cast<double>(n.bound.l_min) / 600.0));
    if (n.bound.feasible) CHECK(n.portion <= 1.0);
  }
}

TEST_CASE("coupled column-wise bound has no solution at small rank") {
  // With g = ceil(l / r) the subtracted term 12(g+1) log(l/(g+1)) grows
  // linearly in l with slope about 12 ln(r) / r, which exceeds 1 for r <= 10.
  for (int d : {100, 1000, 10000}) {
    const int r = static_cast<int>(std::ceil(std::log(d)));
    CHECK_FALSE(coupled_columnwise_lmin(d, r, 0.01, 1'000'000).has_value());
  }
  // Large rank makes the slope small enough for a solution to exist.
  CHECK(coupled_columnwise_lmin(10000, 200, 0.01, 10'000'000).has_value());
}

#include <doctest.h>

#include <Eigen/SVD>
#include <numeric>
#include <random>

#include "rmc/numeric.hpp"
#include "rmc/sim.hpp"

using namespace rmc;

TEST_CASE("instances are exactly rank r and reproducible") {
  const auto a = generate_instance(6, 9, 2, NoiseBudget::global(0), true, 5);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.X);
  const auto sv = svd.singularValues();
  CHECK(sv(1) > 1e-6);
  CHECK(sv(2) < 1e-10 * sv(0));
  CHECK(a.W.isZero());
  CHECK(a.noise_support.empty());

  const auto b = generate_instance(6, 9, 2, NoiseBudget::global(0), true, 5);
  CHECK(a.X == b.X);

  const auto full = generate_instance(4, 6, 4, NoiseBudget::global(0), true, 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_full(full.X);
  CHECK(svd_full.singularValues()(3) > 1e-8);
}

TEST_CASE("planted noise hits exactly the budget") {
  const auto inst = generate_instance(8, 24, 2, NoiseBudget::global(3), true, 11);
  CHECK(inst.noise_support.size() == 3);
  int differing = 0;
  const auto obs = inst.observations();
  for (const auto& e : obs.entries()) {
    if (e.value != inst.X(e.cell.row, e.cell.col)) ++differing;
  }
  CHECK(differing == 3);

  const auto per = generate_instance(8, 10, 2, NoiseBudget::per_column(2), true, 3);
  std::vector<int> per_col(10, 0);
  for (const Cell& c : per.noise_support) per_col[static_cast<std::size_t>(c.col)]++;
  for (int n : per_col) CHECK(n == 2);

  const auto other = generate_instance(8, 24, 2, NoiseBudget::global(3), true, 12);
  CHECK(other.noise_support != inst.noise_support);
}

TEST_CASE("noise stays on observed cells") {
  const auto p = sample_uniform_pattern(8, 12, 5, 2);
  const auto inst = generate_instance(p, 2, NoiseBudget::global(4), true, 2);
  for (const Cell& c : inst.noise_support) CHECK(p.contains(c));
  CHECK(inst.observations().size() == static_cast<std::size_t>(p.observed_count()));
}

TEST_CASE("infeasible budgets are rejected") {
  const auto p = SamplingPattern::from_columns(3, {{0}, {1, 2}});
  CHECK_THROWS_AS(generate_instance(p, 1, NoiseBudget::global(5), true, 0), PreconditionError);
  CHECK_THROWS_AS(generate_instance(p, 1, NoiseBudget::per_column(2), true, 0), PreconditionError);
  CHECK_THROWS_AS(generate_instance(3, 2, 4, NoiseBudget::global(0), true, 0), PreconditionError);
}

TEST_CASE("noiseless planted data fits at its rank") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_instance(8, 24, 2, NoiseBudget::global(0), true, seed);
    FitOptions opts;
    opts.seed = seed;
    const auto fit = rank_r_fit(inst.observations(), 2, opts);
    if (fit.residual <= 1e-8) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("rank r+1 data does not fit at rank r") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_instance(8, 24, 3, NoiseBudget::global(0), true, seed);
    const auto fit = rank_r_fit(inst.observations(), 2);
    CHECK(fit.residual > 1e-3);
    CHECK_FALSE(fit.admits);
  }
}

TEST_CASE("fits on partially observed data") {
  const auto p = sample_uniform_pattern(10, 30, 6, 8);
  const auto inst = generate_instance(p, 2, NoiseBudget::global(0), true, 8);
  const auto fit = rank_r_fit(inst.observations(), 2);
  CHECK(fit.admits);
  CHECK(fit.underdetermined_columns.empty());
}

TEST_CASE("full-rank fit is exact") {
  const auto inst = generate_instance(4, 5, 4, NoiseBudget::global(0), true, 3);
  CHECK(rank_r_fit(inst.observations(), 4).residual <= 1e-10);
}

TEST_CASE("residual does not increase with rank") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance(6, 12, 3, NoiseBudget::global(2), true, seed);
    const auto obs = inst.observations();
    double prev = 1e300;
    for (int r = 1; r <= 4; ++r) {
      const double res = rank_r_fit(obs, r).residual;
      CHECK(res <= prev + 1e-9);
      prev = res;
    }
  }
}

TEST_CASE("residual is invariant under row and column permutations") {
  const auto inst = generate_instance(7, 10, 2, NoiseBudget::global(2), true, 21);
  const auto obs = inst.observations();
  std::mt19937_64 rng(21);
  std::vector<int> rp(7), cp(10);
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(cp.begin(), cp.end(), 0);
  std::shuffle(rp.begin(), rp.end(), rng);
  std::shuffle(cp.begin(), cp.end(), rng);
  std::vector<Entry> moved;
  for (const auto& e : obs.entries()) {
    moved.push_back({{rp[static_cast<std::size_t>(e.cell.row)], cp[static_cast<std::size_t>(e.cell.col)]}, e.value});
  }
  const double a = rank_r_fit(obs, 2).residual;
  const double b = rank_r_fit(Observations(7, 10, moved), 2).residual;
  CHECK(a == doctest::Approx(b).epsilon(1e-4));
}

TEST_CASE("underdetermined columns are flagged") {
  std::vector<Entry> e{{{0, 0}, 1.0}, {{1, 0}, 2.0}, {{2, 0}, 3.0}, {{0, 1}, 1.0}};
  const auto fit = rank_r_fit(Observations(3, 2, e), 2);
  CHECK(fit.underdetermined_columns == std::vector<int>{1});
}

TEST_CASE("thread count does not change the fit") {
  const auto inst = generate_instance(8, 16, 2, NoiseBudget::global(3), true, 4);
  FitOptions one, many;
  many.threads = 4;
  CHECK(rank_r_fit(inst.observations(), 2, one).residual == rank_r_fit(inst.observations(), 2, many).residual);
}

TEST_CASE("observations") {
  std::vector<Entry> e{{{1, 0}, 2.0}, {{0, 1}, 1.0}};
  const Observations obs(2, 2, e);
  CHECK(obs.entries()[0].cell == Cell{0, 1});
  CHECK(obs.norm() == doctest::Approx(std::sqrt(5.0)));
  const std::vector<Cell> drop{{0, 1}};
  CHECK(obs.without(drop).size() == 1);
  const std::vector<Cell> missing{{0, 0}};
  CHECK_THROWS(obs.without(missing));
  std::vector<Entry> dup{{{0, 0}, 1.0}, {{0, 0}, 2.0}};
  CHECK_THROWS_AS(Observations(2, 2, dup), PreconditionError);
}

TEST_CASE("seed mixing separates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}

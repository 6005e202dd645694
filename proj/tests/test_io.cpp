#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rmc/io.hpp"
#include "rmc/report.hpp"

using namespace rmc;

TEST_CASE("pattern round trip is byte-stable") {
  const std::string text = "3 2\n0 0\n0 1\n2 1\n";
  std::istringstream in(text);
  const auto p = read_pattern(in);
  CHECK(p.observed_count() == 3);
  std::ostringstream out;
  write_pattern(out, p);
  CHECK(out.str() == text);
}

TEST_CASE("pattern reader skips comments and rejects bad input") {
  std::istringstream ok("# header\n2 2\n\n1 1\n# cell\n0 0\n");
  CHECK(read_pattern(ok).observed_count() == 2);
  std::istringstream dup("2 2\n0 0\n0 0\n");
  CHECK_THROWS_AS(read_pattern(dup), ParseError);
  std::istringstream range("2 2\n2 0\n");
  CHECK_THROWS_AS(read_pattern(range), ParseError);
  std::istringstream junk("2 2\n0 x\n");
  CHECK_THROWS_AS(read_pattern(junk), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_pattern(empty), ParseError);
}

TEST_CASE("observation round trip") {
  const auto inst = generate_instance(4, 5, 2, NoiseBudget::global(1), true, 2);
  std::ostringstream out;
  write_observations(out, inst.observations());
  std::istringstream in(out.str());
  const auto back = read_observations(in);
  REQUIRE(back.size() == inst.observations().size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.entries()[i].cell == inst.observations().entries()[i].cell);
    CHECK(back.entries()[i].value == inst.observations().entries()[i].value);
  }
  std::ostringstream again;
  write_observations(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("sweep CSV round trip") {
  const auto rows = sweep(600, 60000, 0.01, 1, 5, {-1, 1});
  std::ostringstream out;
  write_sweep_csv(out, rows);
  CHECK(out.str().rfind("r,g,l_min,portion,binding,feasible,premise_ok\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_sweep_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].r == rows[i].r);
    CHECK(back[i].g == rows[i].g);
    CHECK(back[i].l_min == rows[i].bound.l_min);
    CHECK(back[i].portion == doctest::Approx(rows[i].portion).epsilon(1e-6));
    CHECK(back[i].binding == rows[i].bound.binding);
    CHECK(back[i].feasible == rows[i].bound.feasible);
  }
}

TEST_CASE("trials CSV round trip") {
  TrialOutcome o;
  o.l = 4;
  o.pass_count = 7;
  o.trial_count = 10;
  o.point_estimate = 0.7;
  o.confidence_interval = wilson_interval(7, 10);
  std::ostringstream out;
  write_trials_csv(out, {o}, 12);
  std::istringstream in(out.str());
  const auto back = read_trials_csv(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].l == 4);
  CHECK(back[0].pass == 7);
  CHECK(back[0].trials == 10);
  CHECK(std::abs(back[0].ci_lo - o.confidence_interval.lo) < 1e-6);
  CHECK(back[0].theory_l_min == 12);
}

TEST_CASE("certificate report round trip") {
  const auto cm = build_constraint_matrix(SamplingPattern::full(3, 4), 1);
  for (const auto& cert : {find_unique_certificate(cm, 1), find_finite_certificate(cm, 1),
                           find_unique_certificate(build_constraint_matrix(SamplingPattern::full(3, 3), 1), 1)}) {
    const auto j = certificate_json(cm, cert);
    const auto back = certificate_from_json(Json::parse(j.dump()));
    CHECK(back.verdict == cert.verdict);
    CHECK(back.finite_witness == cert.finite_witness);
    CHECK(back.unique_witness == cert.unique_witness);
    CHECK(back.refutation.has_value() == cert.refutation.has_value());
  }
  const auto three = build_constraint_matrix(SamplingPattern::full(4, 5), 1);
  const auto ref = find_unique_certificate(three, 1);
  const auto back = certificate_from_json(Json::parse(certificate_json(three, ref).dump()));
  CHECK(check_certificate(three, 1, back) == check_certificate(three, 1, ref));
}

TEST_CASE("removal report round trip") {
  const RemovalSet r{{{0, 1}, {2, 3}}};
  CHECK(removal_from_json(Json::parse(removal_json(r).dump())) == r);
}

// Text file formats.
//
// Pattern:       first line "d N", then one "row col" per observed cell.
// Observations:  first line "d N", then one "row col value" per cell.
// Lines starting with '#' and blank lines are ignored. Writers emit cells in
// row-major order, which makes parse -> write byte-stable for canonical input.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmc/bounds.hpp"
#include "rmc/numeric.hpp"
#include "rmc/pattern.hpp"
#include "rmc/sim.hpp"

namespace rmc {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SamplingPattern read_pattern(std::istream& in);
void write_pattern(std::ostream& out, const SamplingPattern& pattern);

Observations read_observations(std::istream& in);
void write_observations(std::ostream& out, const Observations& observations);

/// Header: r,g,l_min,portion,binding,feasible,premise_ok
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct SweepCsvRow {
  int r = 0;
  int g = 0;
  std::int64_t l_min = 0;
  double portion = 0.0;
  std::string binding;
  bool feasible = false;
  bool premise_ok = false;
};
std::vector<SweepCsvRow> read_sweep_csv(std::istream& in);

/// Header: l,pass,trials,estimate,ci_lo,ci_hi,theory_lmin
void write_trials_csv(std::ostream& out, const std::vector<TrialOutcome>& outcomes, std::int64_t theory_l_min);

struct TrialCsvRow {
  int l = 0;
  std::int64_t pass = 0;
  std::int64_t trials = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::int64_t theory_l_min = 0;
};
std::vector<TrialCsvRow> read_trials_csv(std::istream& in);

}  // namespace rmc

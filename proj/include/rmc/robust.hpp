// Finite / unique completability under sparse noise: the noiseless
// certificates are required to hold for every hypothesised noise support.
//
// A positive verdict is a deterministic sufficient condition. A refutation
// only shows that some removal pattern lacks a certificate; whether the
// pattern still completes then depends on where the noise actually sits, so
// no converse is claimed.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmc/certify.hpp"
#include "rmc/noise_budget.hpp"
#include "rmc/numeric.hpp"
#include "rmc/pattern.hpp"

namespace rmc {

enum class RobustOutcome { FinitelyCompletable, UniquelyCompletable, Refuted, Indeterminate };

std::string to_string(RobustOutcome v);

struct RobustVerdict {
  RobustOutcome verdict = RobustOutcome::Indeterminate;
  std::optional<RemovalSet> failing_removal;
  std::optional<Certificate> failing_certificate;
  std::int64_t checked = 0;             // removal patterns examined
  std::optional<std::int64_t> total;    // removal patterns quantified over
  bool premise_violated = false;
  std::string reason;

  bool positive() const {
    return verdict == RobustOutcome::FinitelyCompletable || verdict == RobustOutcome::UniquelyCompletable;
  }
};

struct RobustOptions {
  SearchOptions search;
  /// Above this many removal patterns the exact check is skipped.
  std::int64_t enumeration_cap = 10'000'000;
  /// Uniformly sampled removal patterns tried before exact enumeration, and
  /// the only check performed above the cap. Can only refute.
  std::int64_t refutation_probes = 0;
  std::uint64_t seed = 0x5eedULL;
  int threads = 1;
};

/// Removal size and minimum per-column observation count for a check.
struct RemovalPlan {
  int extra = 0;            // removals beyond the budget amount (per column for PerColumn)
  int min_observed = 0;     // per-column premise
};

RemovalPlan finite_plan(int r, NoiseBudget budget);
RemovalPlan unique_plan(int r, NoiseBudget budget);

/// Global(s): every removal of s observed cells must leave a finite
/// certificate (each column needs r + s observations). PerColumn(g): every
/// removal of g + 1 cells per column (each column needs r + g + 1).
RobustVerdict verify_finite(const SamplingPattern& pattern, int r, NoiseBudget budget,
                            const RobustOptions& options = {});

/// Global(s): removals of s + 1 cells, each column needs r + s + 1.
/// PerColumn(g): g + 1 cells per column, each column needs r + g + 1.
/// Every removal pattern must leave a unique certificate.
RobustVerdict verify_unique(const SamplingPattern& pattern, int r, NoiseBudget budget,
                            const RobustOptions& options = {});

/// Raised when no support of size <= s admits a rank-r fit.
class NoSupportFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SupportSearchOptions {
  FitOptions fit;
  /// Upper bound on the number of fully observed (r+1)x(r+1) minors used to
  /// reject candidate supports before fitting.
  std::int64_t max_minors = 500'000;
};

/// Smallest set T of observed cells, |T| <= s, such that the observations
/// outside T admit a rank-r fit with relative residual <= fit.tolerance.
/// Candidates are tried by size, then in lexicographic order of row-major
/// cell tuples; the first that fits is returned.
///
/// A fully observed (r+1)x(r+1) submatrix outside T whose smallest singular
/// value exceeds tolerance * ||observations|| bounds the residual of every
/// rank-r fit from below, so such T are rejected without fitting.
std::vector<Cell> identify_noise_support(const Observations& observations, int r, int s,
                                         const SupportSearchOptions& options = {});

}  // namespace rmc

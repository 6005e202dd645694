// Subset-counting conditions on the constraint matrix and the search for
// finite / unique completability certificates on a noise-free pattern.
//
// For a set S of constraint columns let m(S) be the number of rows covered by
// at least one column of S and n(S) = |S|. The count condition with weight k
// asks that every nonempty S satisfies
//
//     k * m(S) >= n(S) + k * r,
//
// with k = r for the finite-completability witness and k = 1 for the second
// witness of unique completability. Since k * m(S) - k * r is a nondecreasing
// submodular function, the column sets passing the condition are exactly the
// independent sets of a matroid. A witness is a common independent set of
// that matroid and the partition matroid "at most one column per origin",
// so certificate search is matroid intersection.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmc/pattern.hpp"

namespace rmc {

struct CountCondition {
  int rank = 1;
  int weight = 1;  // k, either rank or 1

  static CountCondition finite(int r) { return {r, r}; }
  static CountCondition unique(int r) { return {r, 1}; }
};

/// min over nonempty S subset of `subset` of k*m(S) - n(S) - k*r, computed
/// exactly with one minimum cut per anchor column. Nonnegative iff every
/// nonempty subset passes the condition. `subset` must be nonempty.
std::int64_t min_slack(const ConstraintMatrix& cm, std::span<const int> subset, CountCondition cond);

/// Result of minimising k*m(S) - n(S) - k*r over S that contain the anchor.
struct AnchoredSlack {
  std::int64_t slack = 0;
  std::vector<int> minimizer;  // inclusion-wise minimal minimiser, ascending
};

/// Restricts the minimisation to subsets of `others` + {anchor} containing anchor.
AnchoredSlack anchored_slack(const ConstraintMatrix& cm, std::span<const int> others, int anchor,
                             CountCondition cond);

/// If `independent` passes the condition but independent + {candidate} does
/// not, returns the unique circuit (ascending, includes candidate). Returns
/// nullopt when the extended set still passes.
std::optional<std::vector<int>> find_circuit(const ConstraintMatrix& cm, std::span<const int> independent,
                                             int candidate, CountCondition cond);

/// Size of a largest subset of `elements` passing the condition (greedy).
int count_rank(const ConstraintMatrix& cm, std::span<const int> elements, CountCondition cond);

enum class CertificateVerdict { Finite, Unique, Refuted, Indeterminate };

std::string to_string(CertificateVerdict v);

/// Proof that no witness of the required size exists.
///
/// OriginShortage: `bound` distinct origins are available, fewer than
/// `target`. When `has_rank_bound` is set: with U = finite_part (k = r block) and
/// unique_part (k = 1 block) and E the ground set, the number of distinct
/// origins outside U plus the count-matroid rank of U equals `bound`, and
/// bound < target. By the matroid intersection min-max theorem no common
/// independent set of size `target` exists. Without it, the reason is a
/// counting argument on origins or an exhausted backtracking search.
struct Refutation {
  enum class Kind { RankTooLarge, OriginShortage, RankBound, ExhaustedSearch };

  Kind kind = Kind::RankBound;
  std::string reason;
  bool has_rank_bound = false;
  bool two_blocks = false;  // set for the unique search
  std::vector<int> finite_part;
  std::vector<int> unique_part;
  int bound = 0;
  int target = 0;
};

struct Certificate {
  CertificateVerdict verdict = CertificateVerdict::Indeterminate;
  std::optional<std::vector<int>> finite_witness;  // r(d - r) columns, k = r
  std::optional<std::vector<int>> unique_witness;  // d - r columns, k = 1
  std::optional<Refutation> refutation;
  std::string note;
  std::int64_t nodes = 0;  // min-cut evaluations spent

  bool positive() const { return verdict == CertificateVerdict::Finite || verdict == CertificateVerdict::Unique; }
};

enum class SearchStrategy {
  /// Exact augmenting-path matroid intersection. Decides every instance
  /// within budget.
  MatroidIntersection,
  /// Complete depth-first search over one column per origin, pruned by the
  /// hereditary count condition. Exponential; used as a cross-check.
  Backtracking,
};

struct SearchOptions {
  std::int64_t node_budget = 1'000'000;
  SearchStrategy strategy = SearchStrategy::MatroidIntersection;
};

/// Searches C(Omega) for a proper set of r(d - r) columns passing the k = r
/// condition. `cm` must be built with rank r.
Certificate find_finite_certificate(const ConstraintMatrix& cm, int r, const SearchOptions& options = {});

/// Searches for two origin-disjoint proper sets: r(d - r) columns passing the
/// k = r condition and d - r columns passing the k = 1 condition.
Certificate find_unique_certificate(const ConstraintMatrix& cm, int r, const SearchOptions& options = {});

/// Independent re-check of a certificate. Returns an empty string when the
/// certificate is consistent, otherwise a description of the first problem.
std::string check_certificate(const ConstraintMatrix& cm, int r, const Certificate& cert);

}  // namespace rmc

// Sampling patterns, the constraint matrix built from them, and removal sets.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmc/noise_budget.hpp"

namespace rmc {

/// Raised when an input violates a documented precondition (caller bug).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A zero-based matrix cell. Ordered row-major: by row, then column.
struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Binary d x N observation mask, stored as sorted observed rows per column.
class SamplingPattern {
 public:
  SamplingPattern() = default;

  /// Builds a pattern from an arbitrary list of cells. Throws
  /// PreconditionError on out-of-range or duplicate cells.
  static SamplingPattern from_cells(int rows, int cols, std::span<const Cell> cells);

  /// Builds a pattern from per-column row lists (any order, no duplicates).
  static SamplingPattern from_columns(int rows, std::vector<std::vector<int>> columns);

  static SamplingPattern full(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(columns_.size()); }

  /// Observed rows of column j, ascending.
  std::span<const int> column(int j) const { return columns_[static_cast<std::size_t>(j)]; }
  int column_count(int j) const { return static_cast<int>(column(j).size()); }
  int min_column_count() const;
  std::int64_t observed_count() const { return observed_; }

  bool contains(Cell c) const;

  /// All observed cells in row-major order.
  std::vector<Cell> cells() const;

  friend bool operator==(const SamplingPattern&, const SamplingPattern&) = default;

 private:
  int rows_ = 0;
  std::vector<std::vector<int>> columns_;
  std::int64_t observed_ = 0;
};

/// One column of C(Omega): r base rows plus one extra row of a source column.
struct ConstraintColumn {
  int origin = 0;
  int extra_row = 0;
  std::vector<int> rows;  // ascending, size r + 1
};

/// The binary matrix C(Omega). Each column has exactly r + 1 ones.
struct ConstraintMatrix {
  int rows = 0;
  int rank = 0;
  std::vector<ConstraintColumn> columns;

  int size() const { return static_cast<int>(columns.size()); }
  int origin(int c) const { return columns[static_cast<std::size_t>(c)].origin; }
  /// Number of distinct origins that contribute at least one column.
  int distinct_origins() const;
};

/// For each source column with l observed rows x_1 < ... < x_l, emits l - r
/// columns with ones at {x_1..x_r, x_{r+j}}. Columns with l <= r emit none.
ConstraintMatrix build_constraint_matrix(const SamplingPattern& pattern, int rank);

/// A set of observed cells hypothesised to carry noise. Sorted row-major.
struct RemovalSet {
  std::vector<Cell> cells;

  friend bool operator==(const RemovalSet&, const RemovalSet&) = default;
  friend auto operator<=>(const RemovalSet&, const RemovalSet&) = default;
};

/// Set difference of observed cells. Throws PreconditionError if a removal
/// cell is not observed.
SamplingPattern remove_entries(const SamplingPattern& pattern, const RemovalSet& removal);

/// Lazily enumerates removal sets in a fixed lexicographic order.
///
/// Global(s): every (s + extra)-subset of the observed cells, cells taken in
/// row-major order and subsets in lexicographic order of their index tuples.
/// PerColumn(g): every choice of (g + extra) cells in each column; the
/// Cartesian product is ordered with column 0 most significant.
///
/// Every removal set has a stable index in [0, count()), so a consumer can
/// partition the range and rebuild any element with at().
class RemovalEnumerator {
 public:
  /// Throws PreconditionError when the budget cannot be met by the pattern.
  RemovalEnumerator(const SamplingPattern& pattern, NoiseBudget budget, int extra);

  /// Total number of removal sets, or nullopt if it exceeds 2^63 - 1.
  std::optional<std::int64_t> count() const { return count_; }

  /// Removal set with the given index. Requires count() to be known.
  RemovalSet at(std::int64_t index) const;

  /// Next removal set in order, or nullopt once exhausted.
  std::optional<RemovalSet> next();

  /// Per-column (or global) removal size.
  int removal_size() const { return k_; }

 private:
  RemovalSet materialize() const;
  bool advance();

  const SamplingPattern* pattern_;
  NoiseBudget budget_;
  int k_ = 0;
  std::vector<Cell> global_cells_;
  // One index tuple for Global, one per column for PerColumn.
  std::vector<std::vector<int>> state_;
  std::optional<std::int64_t> count_;
  bool started_ = false;
  bool done_ = false;
};

/// Binomial coefficient, saturating: nullopt when the value exceeds int64.
std::optional<std::int64_t> binomial(std::int64_t n, std::int64_t k);

/// Unranks the index-th k-subset of {0..n-1} in lexicographic order.
std::vector<int> unrank_combination(int n, int k, std::int64_t index);

}  // namespace rmc

#include "rmc/pattern.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace rmc {

std::string NoiseBudget::to_string() const {
  return (is_global() ? "global:" : "percolumn:") + std::to_string(amount);
}

NoiseBudget NoiseBudget::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("noise budget must look like global:s or percolumn:g");
  }
  const std::string kind(text.substr(0, colon));
  const std::string value(text.substr(colon + 1));
  std::size_t used = 0;
  int amount = -1;
  try {
    amount = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || amount < 0) {
    throw std::invalid_argument("noise amount must be a non-negative integer: " + value);
  }
  if (kind == "global") return global(amount);
  if (kind == "percolumn") return per_column(amount);
  throw std::invalid_argument("unknown noise kind: " + kind);
}

SamplingPattern SamplingPattern::from_columns(int rows, std::vector<std::vector<int>> columns) {
  if (rows <= 0 || columns.empty()) {
    throw PreconditionError("pattern dimensions must be positive");
  }
  SamplingPattern p;
  p.rows_ = rows;
  for (auto& col : columns) {
    std::sort(col.begin(), col.end());
    if (std::adjacent_find(col.begin(), col.end()) != col.end()) {
      throw PreconditionError("duplicate observed cell");
    }
    if (!col.empty() && (col.front() < 0 || col.back() >= rows)) {
      throw PreconditionError("observed row out of range");
    }
    p.observed_ += static_cast<std::int64_t>(col.size());
  }
  p.columns_ = std::move(columns);
  return p;
}

SamplingPattern SamplingPattern::from_cells(int rows, int cols, std::span<const Cell> cells) {
  if (rows <= 0 || cols <= 0) {
    throw PreconditionError("pattern dimensions must be positive");
  }
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(cols));
  for (const Cell& c : cells) {
    if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) {
      throw PreconditionError("cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) +
                              ") out of range");
    }
    columns[static_cast<std::size_t>(c.col)].push_back(c.row);
  }
  return from_columns(rows, std::move(columns));
}

SamplingPattern SamplingPattern::full(int rows, int cols) {
  std::vector<int> all(static_cast<std::size_t>(std::max(rows, 0)));
  for (int i = 0; i < rows; ++i) all[static_cast<std::size_t>(i)] = i;
  return from_columns(rows, std::vector<std::vector<int>>(static_cast<std::size_t>(std::max(cols, 0)), all));
}

int SamplingPattern::min_column_count() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& col : columns_) m = std::min(m, static_cast<int>(col.size()));
  return columns_.empty() ? 0 : m;
}

bool SamplingPattern::contains(Cell c) const {
  if (c.col < 0 || c.col >= cols() || c.row < 0 || c.row >= rows_) return false;
  const auto& col = columns_[static_cast<std::size_t>(c.col)];
  return std::binary_search(col.begin(), col.end(), c.row);
}

std::vector<Cell> SamplingPattern::cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(observed_));
  for (int j = 0; j < cols(); ++j) {
    for (int i : column(j)) out.push_back({i, j});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int ConstraintMatrix::distinct_origins() const {
  int n = 0;
  int last = -1;
  for (const auto& c : columns) {
    if (c.origin != last) {
      ++n;
      last = c.origin;
    }
  }
  return n;
}

ConstraintMatrix build_constraint_matrix(const SamplingPattern& pattern, int rank) {
  if (rank < 1) throw PreconditionError("rank must be positive");
  ConstraintMatrix cm;
  cm.rows = pattern.rows();
  cm.rank = rank;
  const auto r = static_cast<std::size_t>(rank);
  for (int j = 0; j < pattern.cols(); ++j) {
    const auto observed = pattern.column(j);
    if (observed.size() <= r) continue;
    for (std::size_t e = r; e < observed.size(); ++e) {
      ConstraintColumn col;
      col.origin = j;
      col.extra_row = observed[e];
      col.rows.assign(observed.begin(), observed.begin() + static_cast<std::ptrdiff_t>(r));
      col.rows.push_back(observed[e]);
      cm.columns.push_back(std::move(col));
    }
  }
  return cm;
}

SamplingPattern remove_entries(const SamplingPattern& pattern, const RemovalSet& removal) {
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(pattern.cols()));
  for (int j = 0; j < pattern.cols(); ++j) {
    const auto col = pattern.column(j);
    columns[static_cast<std::size_t>(j)].assign(col.begin(), col.end());
  }
  for (const Cell& c : removal.cells) {
    if (!pattern.contains(c)) {
      throw PreconditionError("removal of unobserved cell (" + std::to_string(c.row) + ", " +
                              std::to_string(c.col) + ")");
    }
    auto& col = columns[static_cast<std::size_t>(c.col)];
    auto it = std::lower_bound(col.begin(), col.end(), c.row);
    if (it == col.end() || *it != c.row) {
      throw PreconditionError("duplicate cell in removal set");
    }
    col.erase(it);
  }
  return SamplingPattern::from_columns(pattern.rows(), std::move(columns));
}

std::optional<std::int64_t> binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 value = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
  }
  return static_cast<std::int64_t>(value);
}

std::vector<int> unrank_combination(int n, int k, std::int64_t index) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int v = next; v < n; ++v) {
      // Number of combinations that start with v at this slot.
      const auto block = binomial(n - v - 1, k - slot - 1);
      const std::int64_t size = block.value_or(std::numeric_limits<std::int64_t>::max());
      if (index < size) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      index -= size;
    }
  }
  if (static_cast<int>(out.size()) != k) throw std::out_of_range("combination index out of range");
  return out;
}

namespace {

std::vector<int> first_combination(int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] < n - k + i) {
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

RemovalEnumerator::RemovalEnumerator(const SamplingPattern& pattern, NoiseBudget budget, int extra)
    : pattern_(&pattern), budget_(budget), k_(budget.amount + extra) {
  if (budget.amount < 0 || extra < 0) throw PreconditionError("negative removal size");
  if (budget.is_global()) {
    if (pattern.observed_count() < k_) {
      throw PreconditionError("pattern has " + std::to_string(pattern.observed_count()) +
                              " observed cells, cannot remove " + std::to_string(k_));
    }
    global_cells_ = pattern.cells();
    count_ = binomial(pattern.observed_count(), k_);
    state_.push_back(first_combination(k_));
  } else {
    std::int64_t total = 1;
    bool overflow = false;
    for (int j = 0; j < pattern.cols(); ++j) {
      if (pattern.column_count(j) < k_) {
        throw PreconditionError("column " + std::to_string(j) + " has " +
                                std::to_string(pattern.column_count(j)) + " observed cells, cannot remove " +
                                std::to_string(k_));
      }
      const auto b = binomial(pattern.column_count(j), k_);
      if (!b || (*b != 0 && total > std::numeric_limits<std::int64_t>::max() / *b)) {
        overflow = true;
      } else {
        total *= *b;
      }
      state_.push_back(first_combination(k_));
    }
    if (!overflow) count_ = total;
  }
}

RemovalSet RemovalEnumerator::materialize() const {
  RemovalSet out;
  if (budget_.is_global()) {
    for (int idx : state_[0]) out.cells.push_back(global_cells_[static_cast<std::size_t>(idx)]);
  } else {
    for (int j = 0; j < pattern_->cols(); ++j) {
      const auto col = pattern_->column(j);
      for (int idx : state_[static_cast<std::size_t>(j)]) out.cells.push_back({col[static_cast<std::size_t>(idx)], j});
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

bool RemovalEnumerator::advance() {
  if (budget_.is_global()) {
    return next_combination(state_[0], static_cast<int>(global_cells_.size()));
  }
  for (int j = pattern_->cols() - 1; j >= 0; --j) {
    auto& c = state_[static_cast<std::size_t>(j)];
    if (next_combination(c, pattern_->column_count(j))) return true;
    c = first_combination(k_);
  }
  return false;
}

std::optional<RemovalSet> RemovalEnumerator::next() {
  if (done_) return std::nullopt;
  if (started_ && !advance()) {
    done_ = true;
    return std::nullopt;
  }
  started_ = true;
  return materialize();
}

RemovalSet RemovalEnumerator::at(std::int64_t index) const {
  if (!count_ || index < 0 || index >= *count_) throw std::out_of_range("removal index out of range");
  RemovalSet out;
  if (budget_.is_global()) {
    for (int idx : unrank_combination(static_cast<int>(global_cells_.size()), k_, index)) {
      out.cells.push_back(global_cells_[static_cast<std::size_t>(idx)]);
    }
  } else {
    std::vector<std::int64_t> digits(static_cast<std::size_t>(pattern_->cols()));
    for (int j = pattern_->cols() - 1; j >= 0; --j) {
      const std::int64_t radix = *binomial(pattern_->column_count(j), k_);
      digits[static_cast<std::size_t>(j)] = index % radix;
      index /= radix;
    }
    for (int j = 0; j < pattern_->cols(); ++j) {
      const auto col = pattern_->column(j);
      for (int idx : unrank_combination(pattern_->column_count(j), k_, digits[static_cast<std::size_t>(j)])) {
        out.cells.push_back({col[static_cast<std::size_t>(idx)], j});
      }
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

}  // namespace rmc

#include "rmc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rmc/parallel.hpp"

namespace rmc {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Observations::Observations(int rows, int cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows <= 0 || cols <= 0) throw PreconditionError("observation dimensions must be positive");
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.cell < b.cell; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Cell c = entries_[i].cell;
    if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) {
      throw PreconditionError("observation (" + std::to_string(c.row) + ", " + std::to_string(c.col) +
                              ") out of range");
    }
    if (i > 0 && entries_[i - 1].cell == c) throw PreconditionError("duplicate observation");
  }
}

SamplingPattern Observations::pattern() const {
  std::vector<Cell> cells;
  cells.reserve(entries_.size());
  for (const auto& e : entries_) cells.push_back(e.cell);
  return SamplingPattern::from_cells(rows_, cols_, cells);
}

Observations Observations::without(std::span<const Cell> cells) const {
  std::vector<Cell> drop(cells.begin(), cells.end());
  std::sort(drop.begin(), drop.end());
  std::vector<Entry> kept;
  kept.reserve(entries_.size());
  std::size_t k = 0;
  for (const auto& e : entries_) {
    while (k < drop.size() && drop[k] < e.cell) {
      throw PreconditionError("cannot drop unobserved cell (" + std::to_string(drop[k].row) + ", " +
                              std::to_string(drop[k].col) + ")");
    }
    if (k < drop.size() && drop[k] == e.cell) {
      ++k;
      continue;
    }
    kept.push_back(e);
  }
  if (k != drop.size()) throw PreconditionError("cannot drop unobserved cell");
  Observations out;
  out.rows_ = rows_;
  out.cols_ = cols_;
  out.entries_ = std::move(kept);
  return out;
}

double Observations::norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return std::sqrt(s);
}

Observations Instance::observations() const {
  std::vector<Entry> entries;
  for (const Cell& c : pattern.cells()) entries.push_back({c, X(c.row, c.col) + W(c.row, c.col)});
  return Observations(pattern.rows(), pattern.cols(), std::move(entries));
}

namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// k distinct indices from [0, n), ascending.
std::vector<int> sample_indices(int n, int k, std::mt19937_64& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Instance generate_instance(const SamplingPattern& pattern, int r, NoiseBudget budget, bool planted,
                           std::uint64_t seed) {
  const int d = pattern.rows();
  const int n = pattern.cols();
  if (r < 1 || r > std::min(d, n)) throw PreconditionError("rank must lie in [1, min(d, N)]");
  if (budget.amount < 0) throw PreconditionError("negative noise budget");
  if (budget.is_global() && budget.amount > pattern.observed_count()) {
    throw PreconditionError("noise budget exceeds observed cells");
  }
  if (!budget.is_global() && budget.amount > pattern.min_column_count()) {
    throw PreconditionError("per-column noise budget exceeds a column's observed cells");
  }

  std::mt19937_64 rng(seed);
  Instance inst;
  inst.pattern = pattern;
  inst.rank = r;
  inst.budget = budget;
  inst.planted = planted;
  inst.seed = seed;
  const Eigen::MatrixXd left = normal_matrix(d, r, rng);
  const Eigen::MatrixXd right = normal_matrix(r, n, rng);
  inst.X = left * right;
  inst.W = Eigen::MatrixXd::Zero(d, n);

  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw_value = [&] {
    double v = 0.0;
    while (v == 0.0) v = normal(rng);
    return v;
  };
  auto draw_size = [&](int amount) {
    if (planted) return amount;
    std::uniform_int_distribution<int> size(0, amount);
    return size(rng);
  };

  if (budget.is_global()) {
    const auto cells = pattern.cells();
    const int k = draw_size(budget.amount);
    for (int i : sample_indices(static_cast<int>(cells.size()), k, rng)) {
      inst.noise_support.push_back(cells[static_cast<std::size_t>(i)]);
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const auto rows = pattern.column(j);
      const int k = draw_size(budget.amount);
      for (int i : sample_indices(static_cast<int>(rows.size()), k, rng)) {
        inst.noise_support.push_back({rows[static_cast<std::size_t>(i)], j});
      }
    }
  }
  std::sort(inst.noise_support.begin(), inst.noise_support.end());
  for (const Cell& c : inst.noise_support) inst.W(c.row, c.col) = draw_value();
  return inst;
}

Instance generate_instance(int d, int N, int r, NoiseBudget budget, bool planted, std::uint64_t seed) {
  return generate_instance(SamplingPattern::full(d, N), r, budget, planted, seed);
}

namespace {

struct Indexed {
  int other;
  double value;
};

struct FitProblem {
  int rows = 0;
  int cols = 0;
  int rank = 0;
  std::vector<std::vector<Indexed>> by_col;  // (row, value)
  std::vector<std::vector<Indexed>> by_row;  // (col, value)
  double norm = 0.0;
};

// Least squares for one factor row given the other factor.
Eigen::VectorXd solve_factor(const std::vector<Indexed>& data, const Eigen::MatrixXd& other, int rank) {
  const auto m = static_cast<Eigen::Index>(data.size());
  if (m == 0) return Eigen::VectorXd::Zero(rank);
  Eigen::MatrixXd a(m, rank);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a.row(i) = other.row(data[static_cast<std::size_t>(i)].other);
    b(i) = data[static_cast<std::size_t>(i)].value;
  }
  if (m >= rank) return a.colPivHouseholderQr().solve(b);
  return a.completeOrthogonalDecomposition().solve(b);
}

double misfit(const FitProblem& p, const Eigen::MatrixXd& left, const Eigen::MatrixXd& right_t) {
  double s = 0.0;
  for (int j = 0; j < p.cols; ++j) {
    for (const auto& [i, v] : p.by_col[static_cast<std::size_t>(j)]) {
      const double e = left.row(i).dot(right_t.row(j)) - v;
      s += e * e;
    }
  }
  return std::sqrt(s);
}

struct RestartResult {
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd left;
  Eigen::MatrixXd right_t;
};

RestartResult run_restart(const FitProblem& p, Eigen::MatrixXd left, const FitOptions& options) {
  RestartResult res;
  Eigen::MatrixXd right_t(p.cols, p.rank);
  const double scale = p.norm > 0.0 ? p.norm : 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (int j = 0; j < p.cols; ++j) {
      right_t.row(j) = solve_factor(p.by_col[static_cast<std::size_t>(j)], left, p.rank).transpose();
    }
    for (int i = 0; i < p.rows; ++i) {
      left.row(i) = solve_factor(p.by_row[static_cast<std::size_t>(i)], right_t, p.rank).transpose();
    }
    const double current = misfit(p, left, right_t) / scale;
    res.iterations = it;
    if (std::abs(previous - current) < options.change_tolerance || current < 1e-14) {
      res.converged = true;
      previous = current;
      break;
    }
    previous = current;
  }
  res.residual = p.norm > 0.0 ? previous : 0.0;
  res.left = std::move(left);
  res.right_t = std::move(right_t);
  return res;
}

}  // namespace

FitResult rank_r_fit(const Observations& observations, int r, const FitOptions& options) {
  if (r < 1) throw PreconditionError("fit rank must be positive");
  FitProblem p;
  p.rows = observations.rows();
  p.cols = observations.cols();
  p.rank = r;
  p.by_col.resize(static_cast<std::size_t>(p.cols));
  p.by_row.resize(static_cast<std::size_t>(p.rows));
  for (const auto& e : observations.entries()) {
    p.by_col[static_cast<std::size_t>(e.cell.col)].push_back({e.cell.row, e.value});
    p.by_row[static_cast<std::size_t>(e.cell.row)].push_back({e.cell.col, e.value});
  }
  p.norm = observations.norm();

  FitResult out;
  for (int j = 0; j < p.cols; ++j) {
    if (static_cast<int>(p.by_col[static_cast<std::size_t>(j)].size()) < r) out.underdetermined_columns.push_back(j);
  }

  const int restarts = std::max(1, options.restarts);
  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
  parallel_for(0, restarts, options.threads, [&](std::int64_t k) {
    Eigen::MatrixXd init;
    if (k == 0) {
      const double fill = observations.size() > 0
                              ? static_cast<double>(p.rows) * p.cols / static_cast<double>(observations.size())
                              : 1.0;
      Eigen::MatrixXd zero_filled = Eigen::MatrixXd::Zero(p.rows, p.cols);
      for (const auto& e : observations.entries()) zero_filled(e.cell.row, e.cell.col) = e.value * fill;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(zero_filled, Eigen::ComputeThinU);
      init = Eigen::MatrixXd::Zero(p.rows, r);
      const auto avail = std::min<Eigen::Index>(r, svd.matrixU().cols());
      for (Eigen::Index c = 0; c < avail; ++c) {
        init.col(c) = svd.matrixU().col(c) * std::sqrt(std::max(svd.singularValues()(c), 1e-12));
      }
      // Degenerate directions (zero data) get random fill so the solves stay well posed.
      std::mt19937_64 rng(mix_seed(options.seed, 0));
      for (Eigen::Index c = avail; c < r; ++c) init.col(c) = normal_matrix(p.rows, 1, rng);
    } else {
      std::mt19937_64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(k)));
      init = normal_matrix(p.rows, r, rng);
    }
    results[static_cast<std::size_t>(k)] = run_restart(p, std::move(init), options);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k].residual < results[best].residual) best = k;
  }
  out.residual = results[best].residual;
  out.iterations = results[best].iterations;
  out.converged = results[best].converged;
  out.admits = out.residual <= options.tolerance;
  out.left = std::move(results[best].left);
  out.right = results[best].right_t.transpose();
  return out;
}

}  // namespace rmc

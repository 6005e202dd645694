// Desk-scale numerical oracle: synthetic generic instances and a rank-r fit
// test on partially observed data. "Admits a rank-r fit" is a floating-point
// surrogate for the algebraic statements, never a certificate.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "rmc/noise_budget.hpp"
#include "rmc/pattern.hpp"

namespace rmc {

struct Entry {
  Cell cell;
  double value = 0.0;
};

/// Observed values on a d x N grid, sorted row-major, one entry per cell.
class Observations {
 public:
  Observations() = default;
  /// Throws PreconditionError on duplicates or out-of-range cells.
  Observations(int rows, int cols, std::vector<Entry> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  SamplingPattern pattern() const;
  /// Copy without the given cells. Throws if a cell is not observed.
  Observations without(std::span<const Cell> cells) const;
  double norm() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Entry> entries_;
};

/// Low-rank data X = A * B plus sparse noise W restricted to observed cells.
struct Instance {
  Eigen::MatrixXd X;
  Eigen::MatrixXd W;
  SamplingPattern pattern;
  int rank = 0;
  NoiseBudget budget;
  bool planted = false;
  std::uint64_t seed = 0;
  std::vector<Cell> noise_support;  // row-major

  /// (X + W) on the observed cells.
  Observations observations() const;
};

/// Draws standard normal factors (d x r, r x N) and standard normal noise on
/// a support chosen uniformly among observed cells. Planted mode uses exactly
/// the budget amount (s cells overall, or g per column); otherwise the size
/// is uniform in [0, amount]. Deterministic in the seed.
Instance generate_instance(const SamplingPattern& pattern, int r, NoiseBudget budget, bool planted,
                           std::uint64_t seed);

/// Fully observed variant.
Instance generate_instance(int d, int N, int r, NoiseBudget budget, bool planted, std::uint64_t seed);

struct FitOptions {
  double tolerance = 1e-6;  // relative residual accepted as a fit
  int max_iterations = 500;
  int restarts = 5;
  double change_tolerance = 1e-10;
  std::uint64_t seed = 0x5eedULL;
  int threads = 1;
};

struct FitResult {
  double residual = 0.0;  // ||misfit||_F / ||observations||_F over observed cells
  int iterations = 0;     // of the best restart
  bool converged = false;
  bool admits = false;    // residual <= tolerance
  std::vector<int> underdetermined_columns;  // fewer than r observations
  Eigen::MatrixXd left;   // d x r
  Eigen::MatrixXd right;  // r x N
};

/// Alternating least squares with restarts. The first restart is initialised
/// from the top-r singular vectors of the rescaled zero-filled data, the
/// others from random factors. Returns the best restart.
FitResult rank_r_fit(const Observations& observations, int r, const FitOptions& options = {});

/// SplitMix64 step; used to derive independent per-task seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rmc

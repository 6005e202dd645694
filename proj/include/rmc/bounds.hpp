// Minimal per-column sample counts from the union-bound sampling guarantees.
//
//   noiseless:  l > max{12 log(d/eps) + 12, 2r}
//   Global(s):  l - 12c log(l/c) > max{12(log(d/eps) + c), 2r, 2r + s + 1},  c = r + s + 1
//   PerCol(g):  l - 12c log(l/c) > max{12(log(d/eps) + c), 2r, r + g + 1},   c = g + 1
//
// l_min is the smallest integer count satisfying the inequality, found by an
// upward scan from l = c (a column must hold at least the c removals the
// union bound ranges over).
#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rmc/noise_budget.hpp"

namespace rmc {

struct BoundQuery {
  int d = 0;
  std::optional<std::int64_t> N;
  int r = 1;
  double epsilon = 0.01;
  std::optional<NoiseBudget> budget;  // nullopt: noiseless
  double log_base = std::numbers::e;
};

struct BoundResult {
  std::int64_t l_min = 0;
  std::string binding;      // active branch of the max
  bool feasible = false;    // l_min <= d
  bool premise_ok = false;  // r <= d / 6
  std::optional<bool> finite_N_ok;
  std::optional<bool> unique_N_ok;
  double rhs = 0.0;         // value of the max
};

/// Throws std::invalid_argument for eps outside (0, 1), r < 1, d < 1.
void validate(const BoundQuery& q);

/// Left side of the governing inequality at count l (l itself when noiseless).
double bound_lhs(const BoundQuery& q, std::int64_t l);
/// Right side (the max) and the name of its active branch.
std::pair<double, std::string> bound_rhs(const BoundQuery& q);
bool bound_holds(const BoundQuery& q, std::int64_t l);

BoundResult noiseless_bound(const BoundQuery& q);
BoundResult global_noise_bound(const BoundQuery& q);
BoundResult columnwise_noise_bound(const BoundQuery& q);
/// Dispatches on q.budget.
BoundResult compute_bound(const BoundQuery& q);

/// Column-wise bound with the noise level tied to the count: g = ceil(l / r)
/// at every l. Returns nullopt when no l <= max_l satisfies the inequality.
std::optional<std::int64_t> coupled_columnwise_lmin(int d, int r, double epsilon, std::int64_t max_l,
                                                    double log_base = std::numbers::e);

struct SweepRow {
  int r = 0;
  int g = -1;  // -1: noiseless curve
  BoundResult bound;
  double portion = 0.0;  // l_min / d
};

/// One row per (g, r), ordered by g then r. g = -1 selects the noiseless bound.
std::vector<SweepRow> sweep(int d, std::int64_t N, double epsilon, int r_min, int r_max, const std::vector<int>& g_values);

}  // namespace rmc

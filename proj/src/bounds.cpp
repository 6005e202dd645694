#include "rmc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmc {

namespace {

constexpr std::int64_t kScanLimit = std::int64_t{1} << 40;

double log_in(double x, double base) { return std::log(x) / std::log(base); }

// c in "l - 12c log(l/c)": removals the union bound ranges over per column.
int removal_count(const BoundQuery& q) {
  if (!q.budget) return 0;
  return q.budget->is_global() ? q.r + q.budget->amount + 1 : q.budget->amount + 1;
}

BoundResult finish(const BoundQuery& q, std::int64_t l_min) {
  BoundResult res;
  res.l_min = l_min;
  const auto [rhs, binding] = bound_rhs(q);
  res.rhs = rhs;
  res.binding = binding;
  res.feasible = l_min <= q.d;
  res.premise_ok = 6 * static_cast<std::int64_t>(q.r) <= q.d;
  if (q.N) {
    const std::int64_t rank_dim = static_cast<std::int64_t>(q.r) * (q.d - q.r);
    res.finite_N_ok = *q.N >= rank_dim;
    res.unique_N_ok = *q.N >= rank_dim + (q.d - q.r);
  }
  return res;
}

BoundResult scan(const BoundQuery& q) {
  validate(q);
  const std::int64_t start = std::max(1, removal_count(q));
  for (std::int64_t l = start; l < kScanLimit; ++l) {
    if (bound_holds(q, l)) return finish(q, l);
  }
  throw std::runtime_error("bound scan did not terminate");
}

}  // namespace

void validate(const BoundQuery& q) {
  if (q.d < 1) throw std::invalid_argument("d must be positive");
  if (q.r < 1) throw std::invalid_argument("r must be positive");
  if (!(q.epsilon > 0.0 && q.epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (q.budget && q.budget->amount < 0) throw std::invalid_argument("noise amount must be non-negative");
  if (!(q.log_base > 1.0)) throw std::invalid_argument("log base must exceed 1");
}

double bound_lhs(const BoundQuery& q, std::int64_t l) {
  const double len = static_cast<double>(l);
  if (!q.budget) return len;
  const double c = removal_count(q);
  return len - 12.0 * c * log_in(len / c, q.log_base);
}

std::pair<double, std::string> bound_rhs(const BoundQuery& q) {
  const double log_term = log_in(static_cast<double>(q.d) / q.epsilon, q.log_base);
  const double two_r = 2.0 * q.r;
  std::vector<std::pair<double, std::string>> branches;
  if (!q.budget) {
    branches = {{12.0 * log_term + 12.0, "12log(d/eps)+12"}, {two_r, "2r"}};
  } else if (q.budget->is_global()) {
    const double c = removal_count(q);
    branches = {{12.0 * (log_term + c), "12(log(d/eps)+r+s+1)"},
                {two_r, "2r"},
                {two_r + q.budget->amount + 1.0, "2r+s+1"}};
  } else {
    const double c = removal_count(q);
    branches = {{12.0 * (log_term + c), "12(log(d/eps)+g+1)"},
                {two_r, "2r"},
                {static_cast<double>(q.r) + q.budget->amount + 1.0, "r+g+1"}};
  }
  // First branch wins ties.
  auto best = branches.front();
  for (const auto& b : branches) {
    if (b.first > best.first) best = b;
  }
  return best;
}

bool bound_holds(const BoundQuery& q, std::int64_t l) {
  if (l < std::max(1, removal_count(q))) return false;
  return bound_lhs(q, l) > bound_rhs(q).first;
}

BoundResult noiseless_bound(const BoundQuery& q) {
  if (q.budget) throw std::invalid_argument("noiseless bound takes no noise budget");
  return scan(q);
}

BoundResult global_noise_bound(const BoundQuery& q) {
  if (!q.budget || !q.budget->is_global()) throw std::invalid_argument("global bound needs a Global budget");
  return scan(q);
}

BoundResult columnwise_noise_bound(const BoundQuery& q) {
  if (!q.budget || q.budget->is_global()) throw std::invalid_argument("column-wise bound needs a PerColumn budget");
  return scan(q);
}

BoundResult compute_bound(const BoundQuery& q) {
  if (!q.budget) return noiseless_bound(q);
  return q.budget->is_global() ? global_noise_bound(q) : columnwise_noise_bound(q);
}

std::optional<std::int64_t> coupled_columnwise_lmin(int d, int r, double epsilon, std::int64_t max_l,
                                                    double log_base) {
  BoundQuery q;
  q.d = d;
  q.r = r;
  q.epsilon = epsilon;
  q.log_base = log_base;
  validate(q);
  for (std::int64_t l = 1; l <= max_l; ++l) {
    q.budget = NoiseBudget::per_column(static_cast<int>((l + r - 1) / r));
    if (bound_holds(q, l)) return l;
  }
  return std::nullopt;
}

std::vector<SweepRow> sweep(int d, std::int64_t N, double epsilon, int r_min, int r_max,
                            const std::vector<int>& g_values) {
  std::vector<int> gs = g_values;
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  std::vector<SweepRow> rows;
  for (int g : gs) {
    if (g < -1) throw std::invalid_argument("g must be -1 (noiseless) or non-negative");
    for (int r = r_min; r <= r_max; ++r) {
      BoundQuery q;
      q.d = d;
      q.N = N;
      q.r = r;
      q.epsilon = epsilon;
      if (g >= 0) q.budget = NoiseBudget::per_column(g);
      SweepRow row;
      row.r = r;
      row.g = g;
      row.bound = compute_bound(q);
      row.portion = static_cast<double>(row.bound.l_min) / d;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace rmc

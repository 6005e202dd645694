#include "rmc/robust.hpp"

#include <algorithm>
#include <random>

#include "rmc/parallel.hpp"

namespace rmc {

std::string to_string(RobustOutcome v) {
  switch (v) {
    case RobustOutcome::FinitelyCompletable: return "FinitelyCompletable";
    case RobustOutcome::UniquelyCompletable: return "UniquelyCompletable";
    case RobustOutcome::Refuted: return "Refuted";
    case RobustOutcome::Indeterminate: return "Indeterminate";
  }
  return "?";
}

RemovalPlan finite_plan(int r, NoiseBudget budget) {
  if (budget.is_global()) return {0, r + budget.amount};
  return {1, r + budget.amount + 1};
}

RemovalPlan unique_plan(int r, NoiseBudget budget) {
  return {1, r + budget.amount + 1};
}

namespace {

// Uniformly random removal set of the enumerator's shape.
RemovalSet random_removal(const SamplingPattern& pattern, NoiseBudget budget, int k, std::mt19937_64& rng) {
  auto pick = [&](int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> u(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(u(rng))]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  };
  RemovalSet out;
  if (budget.is_global()) {
    const auto cells = pattern.cells();
    for (int i : pick(static_cast<int>(cells.size()))) out.cells.push_back(cells[static_cast<std::size_t>(i)]);
  } else {
    for (int j = 0; j < pattern.cols(); ++j) {
      const auto rows = pattern.column(j);
      for (int i : pick(static_cast<int>(rows.size()))) out.cells.push_back({rows[static_cast<std::size_t>(i)], j});
    }
  }
  std::sort(out.cells.begin(), out.cells.end());
  return out;
}

RobustVerdict verify(const SamplingPattern& pattern, int r, NoiseBudget budget, const RobustOptions& options,
                     bool unique) {
  if (r < 1) throw PreconditionError("rank must be positive");
  if (budget.amount < 0) throw PreconditionError("negative noise budget");
  const RemovalPlan plan = unique ? unique_plan(r, budget) : finite_plan(r, budget);
  const RobustOutcome success = unique ? RobustOutcome::UniquelyCompletable : RobustOutcome::FinitelyCompletable;

  RobustVerdict out;
  if (pattern.min_column_count() < plan.min_observed) {
    out.verdict = RobustOutcome::Refuted;
    out.premise_violated = true;
    out.reason = "premise unmet: every column needs at least " + std::to_string(plan.min_observed) +
                 " observed entries, the sparsest has " + std::to_string(pattern.min_column_count());
    return out;
  }

  RemovalEnumerator removals(pattern, budget, plan.extra);
  out.total = removals.count();

  auto check = [&](const RemovalSet& removal) {
    const auto cm = build_constraint_matrix(remove_entries(pattern, removal), r);
    return unique ? find_unique_certificate(cm, r, options.search) : find_finite_certificate(cm, r, options.search);
  };

  const bool over_cap = !out.total || *out.total > options.enumeration_cap;

  // Random probes: can only refute.
  if (options.refutation_probes > 0) {
    std::mt19937_64 rng(options.seed);
    std::optional<std::pair<RemovalSet, Certificate>> worst;
    for (std::int64_t p = 0; p < options.refutation_probes; ++p) {
      RemovalSet removal = over_cap ? random_removal(pattern, budget, removals.removal_size(), rng)
                                    : removals.at(std::uniform_int_distribution<std::int64_t>(0, *out.total - 1)(rng));
      ++out.checked;
      auto cert = check(removal);
      if (cert.verdict == CertificateVerdict::Refuted && (!worst || removal < worst->first)) {
        worst = {std::move(removal), std::move(cert)};
      }
    }
    if (worst) {
      out.verdict = RobustOutcome::Refuted;
      out.failing_removal = std::move(worst->first);
      out.failing_certificate = std::move(worst->second);
      out.reason = "a sampled removal pattern admits no certificate";
      return out;
    }
  }

  if (over_cap) {
    out.verdict = RobustOutcome::Indeterminate;
    out.reason = "removal patterns (" + (out.total ? std::to_string(*out.total) : std::string(">2^63")) +
                 ") exceed the enumeration cap of " + std::to_string(options.enumeration_cap);
    return out;
  }

  // Exact enumeration in blocks; the first failure in enumeration order wins.
  const std::int64_t total = *out.total;
  const std::int64_t block = std::max<std::int64_t>(64, 16 * resolve_threads(options.threads));
  bool indeterminate = false;
  std::int64_t examined = 0;
  for (std::int64_t start = 0; start < total; start += block) {
    const std::int64_t stop = std::min(total, start + block);
    std::vector<Certificate> results(static_cast<std::size_t>(stop - start));
    parallel_for(start, stop, options.threads,
                 [&](std::int64_t i) { results[static_cast<std::size_t>(i - start)] = check(removals.at(i)); });
    for (std::int64_t i = start; i < stop; ++i) {
      const auto& cert = results[static_cast<std::size_t>(i - start)];
      ++examined;
      if (cert.verdict == CertificateVerdict::Refuted) {
        out.verdict = RobustOutcome::Refuted;
        out.failing_removal = removals.at(i);
        out.failing_certificate = cert;
        out.checked += examined;
        out.reason = "removal pattern #" + std::to_string(i) + " admits no certificate";
        return out;
      }
      if (cert.verdict == CertificateVerdict::Indeterminate) indeterminate = true;
    }
  }
  out.checked += examined;
  if (indeterminate) {
    out.verdict = RobustOutcome::Indeterminate;
    out.reason = "certificate search budget exhausted on some removal pattern";
  } else {
    out.verdict = success;
  }
  return out;
}

}  // namespace

RobustVerdict verify_finite(const SamplingPattern& pattern, int r, NoiseBudget budget, const RobustOptions& options) {
  return verify(pattern, r, budget, options, false);
}

RobustVerdict verify_unique(const SamplingPattern& pattern, int r, NoiseBudget budget, const RobustOptions& options) {
  return verify(pattern, r, budget, options, true);
}

namespace {

/// Fully observed (r+1)x(r+1) submatrices that no rank-r fit can match to
/// within tolerance, stored as entry indices.
std::vector<std::vector<int>> certifying_minors(const Observations& obs, int r, double threshold,
                                                std::int64_t max_minors) {
  const int d = obs.rows();
  const int n = obs.cols();
  const int k = r + 1;
  std::vector<int> index(static_cast<std::size_t>(d) * static_cast<std::size_t>(n), -1);
  for (std::size_t e = 0; e < obs.entries().size(); ++e) {
    const Cell c = obs.entries()[e].cell;
    index[static_cast<std::size_t>(c.row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c.col)] =
        static_cast<int>(e);
  }
  auto at = [&](int row, int col) {
    return index[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)];
  };

  std::vector<std::vector<int>> out;
  if (k > d || k > n) return out;
  std::int64_t examined = 0;
  std::vector<int> cols(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cols[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd minor(k, k);
  while (examined < max_minors) {
    std::vector<int> common;
    for (int row = 0; row < d; ++row) {
      bool all = true;
      for (int c : cols) all = all && at(row, c) >= 0;
      if (all) common.push_back(row);
    }
    const int m = static_cast<int>(common.size());
    if (m >= k) {
      std::vector<int> rows(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = i;
      while (examined < max_minors) {
        ++examined;
        std::vector<int> cells;
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            const int e = at(common[static_cast<std::size_t>(rows[static_cast<std::size_t>(a)])], cols[static_cast<std::size_t>(b)]);
            minor(a, b) = obs.entries()[static_cast<std::size_t>(e)].value;
            cells.push_back(e);
          }
        }
        const double smallest = Eigen::JacobiSVD<Eigen::MatrixXd>(minor).singularValues()(k - 1);
        if (smallest > threshold) {
          std::sort(cells.begin(), cells.end());
          out.push_back(std::move(cells));
        }
        int i = k - 1;
        while (i >= 0 && rows[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++rows[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) rows[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    int i = k - 1;
    while (i >= 0 && cols[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cols[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

std::vector<Cell> identify_noise_support(const Observations& observations, int r, int s,
                                         const SupportSearchOptions& options) {
  if (r < 1) throw PreconditionError("rank must be positive");
  if (s < 0) throw PreconditionError("noise budget must be non-negative");
  const int total = static_cast<int>(observations.size());
  const double threshold = options.fit.tolerance * observations.norm();
  const auto minors = certifying_minors(observations, r, threshold, options.max_minors);

  std::vector<char> removed(static_cast<std::size_t>(total), 0);
  auto survives_screen = [&] {
    for (const auto& minor : minors) {
      bool hit = false;
      for (int e : minor) {
        if (removed[static_cast<std::size_t>(e)]) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return true;
  };

  for (int size = 0; size <= std::min(s, total); ++size) {
    std::vector<int> combo(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
    while (true) {
      for (int e : combo) removed[static_cast<std::size_t>(e)] = 1;
      const bool candidate = survives_screen();
      for (int e : combo) removed[static_cast<std::size_t>(e)] = 0;
      if (candidate) {
        std::vector<Cell> support;
        for (int e : combo) support.push_back(observations.entries()[static_cast<std::size_t>(e)].cell);
        if (rank_r_fit(observations.without(support), r, options.fit).admits) return support;
      }
      int i = size - 1;
      while (i >= 0 && combo[static_cast<std::size_t>(i)] == total - size + i) --i;
      if (i < 0) break;
      ++combo[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  throw NoSupportFound("no support of at most " + std::to_string(s) + " cells admits a rank-" + std::to_string(r) +
                       " fit within relative tolerance");
}

}  // namespace rmc

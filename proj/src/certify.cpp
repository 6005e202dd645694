#include "rmc/certify.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>

#include "rmc/max_flow.hpp"

namespace rmc {

std::string to_string(CertificateVerdict v) {
  switch (v) {
    case CertificateVerdict::Finite: return "Finite";
    case CertificateVerdict::Unique: return "Unique";
    case CertificateVerdict::Refuted: return "Refuted";
    case CertificateVerdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

AnchoredSlack anchored_slack(const ConstraintMatrix& cm, std::span<const int> others, int anchor,
                             CountCondition cond) {
  // Project selection: source -> column (profit 1, anchor forced), column ->
  // covered row (infinite), row -> sink (cost k). For S containing the anchor
  // the cut is (n - |S|) + k * m(S).
  std::vector<int> cols;
  cols.reserve(others.size() + 1);
  cols.push_back(anchor);
  for (int c : others) {
    if (c != anchor) cols.push_back(c);
  }
  const int n = static_cast<int>(cols.size());
  std::vector<int> row_node(static_cast<std::size_t>(cm.rows), -1);
  int next = 2 + n;
  for (int c : cols) {
    for (int row : cm.columns[static_cast<std::size_t>(c)].rows) {
      if (row_node[static_cast<std::size_t>(row)] < 0) row_node[static_cast<std::size_t>(row)] = next++;
    }
  }
  constexpr int kSource = 0;
  constexpr int kSink = 1;
  MaxFlow flow(next);
  for (int i = 0; i < n; ++i) {
    flow.add_edge(kSource, 2 + i, i == 0 ? MaxFlow::kInfinity : 1);
    for (int row : cm.columns[static_cast<std::size_t>(cols[static_cast<std::size_t>(i)])].rows) {
      flow.add_edge(2 + i, row_node[static_cast<std::size_t>(row)], MaxFlow::kInfinity);
    }
  }
  for (int row = 0; row < cm.rows; ++row) {
    if (row_node[static_cast<std::size_t>(row)] >= 0) flow.add_edge(row_node[static_cast<std::size_t>(row)], kSink, cond.weight);
  }
  const std::int64_t cut = flow.solve(kSource, kSink);
  const auto side = flow.source_side(kSource);

  AnchoredSlack out;
  out.slack = cut - n - static_cast<std::int64_t>(cond.weight) * cond.rank;
  for (int i = 0; i < n; ++i) {
    if (side[static_cast<std::size_t>(2 + i)]) out.minimizer.push_back(cols[static_cast<std::size_t>(i)]);
  }
  std::sort(out.minimizer.begin(), out.minimizer.end());
  return out;
}

std::int64_t min_slack(const ConstraintMatrix& cm, std::span<const int> subset, CountCondition cond) {
  if (subset.empty()) throw PreconditionError("min_slack needs a nonempty subset");
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int anchor : subset) best = std::min(best, anchored_slack(cm, subset, anchor, cond).slack);
  return best;
}

std::optional<std::vector<int>> find_circuit(const ConstraintMatrix& cm, std::span<const int> independent,
                                             int candidate, CountCondition cond) {
  auto result = anchored_slack(cm, independent, candidate, cond);
  if (result.slack >= 0) return std::nullopt;
  // Every violating subset of independent + {candidate} has slack exactly -1,
  // so the minimal minimiser is the unique circuit.
  return std::move(result.minimizer);
}

int count_rank(const ConstraintMatrix& cm, std::span<const int> elements, CountCondition cond) {
  std::vector<int> chosen;
  for (int e : elements) {
    if (anchored_slack(cm, chosen, e, cond).slack >= 0) chosen.push_back(e);
  }
  return static_cast<int>(chosen.size());
}

namespace {

struct BudgetExceeded {};

class NodeCounter {
 public:
  explicit NodeCounter(std::int64_t budget) : budget_(budget) {}
  void spend() {
    if (++used_ > budget_) throw BudgetExceeded{};
  }
  std::int64_t used() const { return used_; }

 private:
  std::int64_t budget_;
  std::int64_t used_ = 0;
};

int origin_count(const ConstraintMatrix& cm) {
  int m = 0;
  for (const auto& c : cm.columns) m = std::max(m, c.origin + 1);
  return m;
}

Certificate refuted(Refutation ref, std::int64_t nodes) {
  Certificate cert;
  cert.verdict = CertificateVerdict::Refuted;
  cert.note = ref.reason;
  cert.refutation = std::move(ref);
  cert.nodes = nodes;
  return cert;
}

/// Common independent set of the origin partition matroid and a direct sum
/// of one or two count matroids over copies of the constraint columns.
/// Element e encodes (block = e / n, column = e % n).
class Intersection {
 public:
  Intersection(const ConstraintMatrix& cm, std::vector<CountCondition> blocks, int target, NodeCounter& counter)
      : cm_(cm),
        blocks_(std::move(blocks)),
        n_(cm.size()),
        target_(target),
        counter_(counter),
        owner_(static_cast<std::size_t>(origin_count(cm)), -1),
        in_set_(static_cast<std::size_t>(n_) * blocks_.size(), false),
        members_(blocks_.size()) {}

  /// Runs to completion. Returns true when a set of size target was found.
  bool run() {
    const int total = static_cast<int>(in_set_.size());
    for (int e = 0; e < total && size_ < target_; ++e) {
      if (owner_[static_cast<std::size_t>(origin(e))] < 0 && !circuit(e)) insert(e);
    }
    while (size_ < target_) {
      if (!augment()) return false;
    }
    return true;
  }

  std::vector<int> block_columns(int b) const {
    auto cols = members_[static_cast<std::size_t>(b)];
    std::sort(cols.begin(), cols.end());
    return cols;
  }

  int size() const { return size_; }

  /// After a failed run(): elements reachable from a source in the final
  /// exchange graph, per block.
  const std::vector<std::vector<int>>& separating_set() const { return separating_; }

 private:
  int block(int e) const { return e / n_; }
  int column(int e) const { return e % n_; }
  int origin(int e) const { return cm_.origin(column(e)); }

  std::optional<std::vector<int>> circuit(int e) {
    counter_.spend();
    const int b = block(e);
    auto c = find_circuit(cm_, members_[static_cast<std::size_t>(b)], column(e), blocks_[static_cast<std::size_t>(b)]);
    if (c) {
      for (int& col : *c) col += b * n_;
    }
    return c;
  }

  void insert(int e) {
    in_set_[static_cast<std::size_t>(e)] = true;
    owner_[static_cast<std::size_t>(origin(e))] = e;
    members_[static_cast<std::size_t>(block(e))].push_back(column(e));
    ++size_;
  }

  void erase(int e) {
    in_set_[static_cast<std::size_t>(e)] = false;
    if (owner_[static_cast<std::size_t>(origin(e))] == e) owner_[static_cast<std::size_t>(origin(e))] = -1;
    auto& m = members_[static_cast<std::size_t>(block(e))];
    m.erase(std::find(m.begin(), m.end(), column(e)));
    --size_;
  }

  bool augment() {
    const int total = static_cast<int>(in_set_.size());
    // Exchange graph: y -> x when I - x + y stays independent in the count
    // matroids (x in the circuit of y); x -> y when it stays independent in
    // the partition matroid (same origin).
    std::vector<std::vector<int>> out(static_cast<std::size_t>(total));
    std::vector<bool> sink(static_cast<std::size_t>(total), false);
    std::vector<bool> source(static_cast<std::size_t>(total), false);
    for (int y = 0; y < total; ++y) {
      if (in_set_[static_cast<std::size_t>(y)]) continue;
      source[static_cast<std::size_t>(y)] = owner_[static_cast<std::size_t>(origin(y))] < 0;
      auto c = circuit(y);
      if (!c) {
        sink[static_cast<std::size_t>(y)] = true;
        continue;
      }
      for (int x : *c) {
        if (x != y) out[static_cast<std::size_t>(y)].push_back(x);
      }
    }
    for (int y = 0; y < total; ++y) {
      if (in_set_[static_cast<std::size_t>(y)]) continue;
      const int x = owner_[static_cast<std::size_t>(origin(y))];
      if (x >= 0) out[static_cast<std::size_t>(x)].push_back(y);
    }

    std::vector<int> prev(static_cast<std::size_t>(total), -2);
    std::deque<int> queue;
    int found = -1;
    for (int y = 0; y < total && found < 0; ++y) {
      if (!source[static_cast<std::size_t>(y)]) continue;
      prev[static_cast<std::size_t>(y)] = -1;
      if (sink[static_cast<std::size_t>(y)]) found = y;
      queue.push_back(y);
    }
    while (!queue.empty() && found < 0) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : out[static_cast<std::size_t>(u)]) {
        if (prev[static_cast<std::size_t>(v)] != -2) continue;
        prev[static_cast<std::size_t>(v)] = u;
        if (!in_set_[static_cast<std::size_t>(v)] && sink[static_cast<std::size_t>(v)]) {
          found = v;
          break;
        }
        queue.push_back(v);
      }
    }

    if (found < 0) {
      record_separating_set(out, source);
      return false;
    }
    std::vector<int> path;
    for (int v = found; v >= 0; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
    // Remove first so that origin ownership is released before reinsertion.
    for (int v : path) {
      if (in_set_[static_cast<std::size_t>(v)]) erase(v);
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      // Path alternates: out-of-set elements sit at even positions from the end.
      const int v = path[i];
      if (i % 2 == 0) insert(v);
    }
    return true;
  }

  // U = elements reachable from a source. No sink is reachable, so the count
  // rank of U equals |I & U| and the partition rank outside U equals |I - U|.
  void record_separating_set(const std::vector<std::vector<int>>& out, const std::vector<bool>& source) {
    const int total = static_cast<int>(in_set_.size());
    std::vector<bool> reach(static_cast<std::size_t>(total), false);
    std::vector<int> stack;
    for (int v = 0; v < total; ++v) {
      if (source[static_cast<std::size_t>(v)]) {
        reach[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : out[static_cast<std::size_t>(u)]) {
        if (!reach[static_cast<std::size_t>(v)]) {
          reach[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
    separating_.assign(blocks_.size(), {});
    for (int e = 0; e < total; ++e) {
      if (reach[static_cast<std::size_t>(e)]) separating_[static_cast<std::size_t>(block(e))].push_back(column(e));
    }
  }

  const ConstraintMatrix& cm_;
  std::vector<CountCondition> blocks_;
  int n_;
  int target_;
  NodeCounter& counter_;
  std::vector<int> owner_;  // origin -> element in the set, or -1
  std::vector<bool> in_set_;
  std::vector<std::vector<int>> members_;  // per block, column indices
  int size_ = 0;
  std::vector<std::vector<int>> separating_;
};

/// Depth-first search over origins, one column per origin, for a sequence of
/// blocks. Pruning relies on the count condition being hereditary.
class Backtracker {
 public:
  Backtracker(const ConstraintMatrix& cm, std::vector<CountCondition> blocks, std::vector<int> sizes,
              NodeCounter& counter)
      : cm_(cm), blocks_(std::move(blocks)), sizes_(std::move(sizes)), counter_(counter),
        used_(static_cast<std::size_t>(origin_count(cm)), false), chosen_(blocks_.size()) {
    for (int c = 0; c < cm.size(); ++c) {
      if (origins_.empty() || origins_.back().first != cm.origin(c)) origins_.push_back({cm.origin(c), {}});
      origins_.back().second.push_back(c);
    }
  }

  bool run() { return search(0, 0); }

  std::vector<int> block_columns(int b) const {
    auto cols = chosen_[static_cast<std::size_t>(b)];
    std::sort(cols.begin(), cols.end());
    return cols;
  }

 private:
  bool search(std::size_t b, std::size_t pos) {
    counter_.spend();
    auto& chosen = chosen_[b];
    const int need = sizes_[b] - static_cast<int>(chosen.size());
    if (need == 0) return b + 1 == blocks_.size() || search(b + 1, 0);
    int available = 0;
    for (std::size_t p = pos; p < origins_.size(); ++p) available += used_[static_cast<std::size_t>(origins_[p].first)] ? 0 : 1;
    if (available < need) return false;
    if (pos >= origins_.size()) return false;

    const auto& [origin, cols] = origins_[pos];
    if (!used_[static_cast<std::size_t>(origin)]) {
      // Best slack first; ties keep ascending extra row.
      std::vector<std::pair<std::int64_t, int>> options;
      for (int c : cols) {
        counter_.spend();
        const auto s = anchored_slack(cm_, chosen, c, blocks_[b]).slack;
        if (s >= 0) options.push_back({-s, c});
      }
      std::stable_sort(options.begin(), options.end(),
                       [](const auto& a, const auto& z) { return a.first < z.first; });
      for (const auto& [neg_slack, c] : options) {
        chosen.push_back(c);
        used_[static_cast<std::size_t>(origin)] = true;
        if (search(b, pos + 1)) return true;
        used_[static_cast<std::size_t>(origin)] = false;
        chosen.pop_back();
      }
    }
    return search(b, pos + 1);
  }

  const ConstraintMatrix& cm_;
  std::vector<CountCondition> blocks_;
  std::vector<int> sizes_;
  NodeCounter& counter_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> chosen_;
  std::vector<std::pair<int, std::vector<int>>> origins_;
};

Certificate search(const ConstraintMatrix& cm, int r, const SearchOptions& options, bool want_unique) {
  if (cm.rank != r) throw PreconditionError("constraint matrix was built with a different rank");
  const int d = cm.rows;
  if (r > d) {
    Refutation ref;
    ref.kind = Refutation::Kind::RankTooLarge;
    ref.reason = "rank " + std::to_string(r) + " exceeds row count " + std::to_string(d);
    return refuted(std::move(ref), 0);
  }
  const int finite_size = r * (d - r);
  const int unique_size = want_unique ? d - r : 0;
  const int target = finite_size + unique_size;
  const int origins = cm.distinct_origins();
  if (origins < target) {
    Refutation ref;
    ref.kind = Refutation::Kind::OriginShortage;
    ref.reason = std::to_string(origins) + " distinct origins available, a proper witness needs " +
                 std::to_string(target);
    ref.bound = origins;
    ref.target = target;
    ref.two_blocks = want_unique;
    return refuted(std::move(ref), 0);
  }

  std::vector<CountCondition> blocks{CountCondition::finite(r)};
  std::vector<int> sizes{finite_size};
  if (want_unique) {
    blocks.push_back(CountCondition::unique(r));
    sizes.push_back(unique_size);
  }

  NodeCounter counter(options.node_budget);
  Certificate cert;
  try {
    bool found = false;
    std::vector<std::vector<int>> witness(blocks.size());
    if (options.strategy == SearchStrategy::MatroidIntersection) {
      Intersection mi(cm, blocks, target, counter);
      found = mi.run();
      if (found) {
        for (std::size_t b = 0; b < blocks.size(); ++b) witness[b] = mi.block_columns(static_cast<int>(b));
      } else {
        Refutation ref;
        ref.kind = Refutation::Kind::RankBound;
        ref.has_rank_bound = true;
        ref.two_blocks = want_unique;
        ref.finite_part = mi.separating_set()[0];
        if (want_unique) ref.unique_part = mi.separating_set()[1];
        ref.bound = mi.size();
        ref.target = target;
        ref.reason = "largest proper set passing the count condition" + std::string(want_unique ? "s" : "") +
                     " has " + std::to_string(mi.size()) + " columns, " + std::to_string(target) + " needed";
        return refuted(std::move(ref), counter.used());
      }
    } else {
      Backtracker bt(cm, blocks, sizes, counter);
      found = bt.run();
      if (found) {
        for (std::size_t b = 0; b < blocks.size(); ++b) witness[b] = bt.block_columns(static_cast<int>(b));
      } else {
        Refutation ref;
        ref.kind = Refutation::Kind::ExhaustedSearch;
        ref.two_blocks = want_unique;
        ref.target = target;
        ref.reason = "exhaustive backtracking found no witness";
        return refuted(std::move(ref), counter.used());
      }
    }
    cert.verdict = want_unique ? CertificateVerdict::Unique : CertificateVerdict::Finite;
    cert.finite_witness = std::move(witness[0]);
    if (want_unique) cert.unique_witness = std::move(witness[1]);
  } catch (const BudgetExceeded&) {
    cert.verdict = CertificateVerdict::Indeterminate;
    cert.note = "search budget of " + std::to_string(options.node_budget) + " nodes exhausted";
    cert.nodes = counter.used();
    return cert;
  }
  cert.nodes = counter.used();
  if (const auto problem = check_certificate(cm, r, cert); !problem.empty()) {
    throw std::logic_error("certificate failed re-verification: " + problem);
  }
  return cert;
}

std::string check_witness(const ConstraintMatrix& cm, const std::vector<int>& w, int size, CountCondition cond,
                          const char* name) {
  if (static_cast<int>(w.size()) != size) {
    return std::string(name) + " witness has " + std::to_string(w.size()) + " columns, expected " +
           std::to_string(size);
  }
  std::vector<int> origins;
  for (int c : w) {
    if (c < 0 || c >= cm.size()) return std::string(name) + " witness index out of range";
    origins.push_back(cm.origin(c));
  }
  std::sort(origins.begin(), origins.end());
  if (std::adjacent_find(origins.begin(), origins.end()) != origins.end()) {
    return std::string(name) + " witness is not proper (repeated origin)";
  }
  if (!w.empty() && min_slack(cm, w, cond) < 0) return std::string(name) + " witness violates the count condition";
  return {};
}

std::string check_refutation(const ConstraintMatrix& cm, int r, const Refutation& ref) {
  switch (ref.kind) {
    case Refutation::Kind::RankTooLarge:
      return r > cm.rows ? "" : "rank does not exceed row count";
    case Refutation::Kind::OriginShortage:
      if (ref.bound != cm.distinct_origins()) return "origin count mismatch";
      return ref.bound < ref.target ? "" : "origin count is not short";
    case Refutation::Kind::ExhaustedSearch:
      return ref.reason.empty() ? "missing reason" : "";
    case Refutation::Kind::RankBound:
      break;
  }
  const int n = cm.size();
  std::vector<bool> in_u0(static_cast<std::size_t>(n), false), in_u1(static_cast<std::size_t>(n), false);
  for (int c : ref.finite_part) in_u0[static_cast<std::size_t>(c)] = true;
  for (int c : ref.unique_part) in_u1[static_cast<std::size_t>(c)] = true;
  std::vector<bool> origin_outside(static_cast<std::size_t>(origin_count(cm)), false);
  for (int c = 0; c < n; ++c) {
    if (!in_u0[static_cast<std::size_t>(c)]) origin_outside[static_cast<std::size_t>(cm.origin(c))] = true;
    if (ref.two_blocks && !in_u1[static_cast<std::size_t>(c)]) origin_outside[static_cast<std::size_t>(cm.origin(c))] = true;
  }
  int bound = static_cast<int>(std::count(origin_outside.begin(), origin_outside.end(), true));
  bound += count_rank(cm, ref.finite_part, CountCondition::finite(r));
  if (ref.two_blocks) bound += count_rank(cm, ref.unique_part, CountCondition::unique(r));
  if (bound != ref.bound) return "rank bound recomputes to " + std::to_string(bound);
  const int expected = r * (cm.rows - r) + (ref.two_blocks ? cm.rows - r : 0);
  if (ref.target != expected) return "refutation target mismatch";
  return bound < ref.target ? "" : "rank bound does not fall short of target";
}

}  // namespace

Certificate find_finite_certificate(const ConstraintMatrix& cm, int r, const SearchOptions& options) {
  return search(cm, r, options, false);
}

Certificate find_unique_certificate(const ConstraintMatrix& cm, int r, const SearchOptions& options) {
  return search(cm, r, options, true);
}

std::string check_certificate(const ConstraintMatrix& cm, int r, const Certificate& cert) {
  const int d = cm.rows;
  switch (cert.verdict) {
    case CertificateVerdict::Finite:
      if (!cert.finite_witness) return "missing finite witness";
      return check_witness(cm, *cert.finite_witness, r * (d - r), CountCondition::finite(r), "finite");
    case CertificateVerdict::Unique: {
      if (!cert.finite_witness || !cert.unique_witness) return "missing witness";
      if (auto p = check_witness(cm, *cert.finite_witness, r * (d - r), CountCondition::finite(r), "finite");
          !p.empty()) {
        return p;
      }
      if (auto p = check_witness(cm, *cert.unique_witness, d - r, CountCondition::unique(r), "unique"); !p.empty()) {
        return p;
      }
      std::vector<int> a, b;
      for (int c : *cert.finite_witness) a.push_back(cm.origin(c));
      for (int c : *cert.unique_witness) b.push_back(cm.origin(c));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      std::vector<int> both;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      return both.empty() ? "" : "witnesses share an origin";
    }
    case CertificateVerdict::Refuted:
      if (!cert.refutation) return "missing refutation";
      return check_refutation(cm, r, *cert.refutation);
    case CertificateVerdict::Indeterminate:
      return {};
  }
  return "unknown verdict";
}

}  // namespace rmc

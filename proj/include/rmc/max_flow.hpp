#pragma once

#include <cstdint>
#include <vector>

namespace rmc {

/// Dinic's maximum flow on a small directed graph with integer capacities.
class MaxFlow {
 public:
  static constexpr std::int64_t kInfinity = std::int64_t{1} << 40;

  explicit MaxFlow(int nodes);

  void add_edge(int from, int to, std::int64_t capacity);
  std::int64_t solve(int source, int sink);

  /// After solve(): nodes reachable from the source in the residual graph.
  /// This is the source side of the inclusion-wise minimal minimum cut.
  std::vector<bool> source_side(int source) const;

 private:
  struct Edge {
    int to;
    int rev;
    std::int64_t cap;
  };

  bool build_levels(int source, int sink);
  std::int64_t push(int node, int sink, std::int64_t limit);

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace rmc

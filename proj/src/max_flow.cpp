#include "rmc/max_flow.hpp"

#include <algorithm>
#include <queue>

namespace rmc {

MaxFlow::MaxFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

void MaxFlow::add_edge(int from, int to, std::int64_t capacity) {
  auto& out = graph_[static_cast<std::size_t>(from)];
  auto& in = graph_[static_cast<std::size_t>(to)];
  out.push_back({to, static_cast<int>(in.size()), capacity});
  in.push_back({from, static_cast<int>(out.size()) - 1, 0});
}

bool MaxFlow::build_levels(int source, int sink) {
  level_.assign(graph_.size(), -1);
  std::queue<int> q;
  level_[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const Edge& e : graph_[static_cast<std::size_t>(u)]) {
      if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
        level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(u)] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

std::int64_t MaxFlow::push(int node, int sink, std::int64_t limit) {
  if (node == sink) return limit;
  auto& edges = graph_[static_cast<std::size_t>(node)];
  for (auto& i = cursor_[static_cast<std::size_t>(node)]; i < edges.size(); ++i) {
    Edge& e = edges[i];
    if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(node)] + 1) continue;
    const std::int64_t pushed = push(e.to, sink, std::min(limit, e.cap));
    if (pushed > 0) {
      e.cap -= pushed;
      graph_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += pushed;
      return pushed;
    }
  }
  return 0;
}

std::int64_t MaxFlow::solve(int source, int sink) {
  std::int64_t flow = 0;
  while (build_levels(source, sink)) {
    cursor_.assign(graph_.size(), 0);
    while (const std::int64_t f = push(source, sink, kInfinity)) flow += f;
  }
  return flow;
}

std::vector<bool> MaxFlow::source_side(int source) const {
  std::vector<bool> seen(graph_.size(), false);
  std::vector<int> stack{source};
  seen[static_cast<std::size_t>(source)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Edge& e : graph_[static_cast<std::size_t>(u)]) {
      if (e.cap > 0 && !seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = true;
        stack.push_back(e.to);
      }
    }
  }
  return seen;
}

}  // namespace rmc

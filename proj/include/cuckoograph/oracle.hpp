#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cuckoograph/graph.hpp"
#include "cuckoograph/task_results.hpp"

/// Reference implementations used as ground truth in tests. Plain maps and
/// textbook algorithms; nothing here is tuned.
namespace cuckoograph::oracle {

class OracleGraph {
 public:
  explicit OracleGraph(bool weighted = false) : weighted_(weighted) {}

  bool weighted() const noexcept { return weighted_; }

  InsertResult insert_edge(NodeId u, NodeId v, Weight increment = 1);
  DeleteResult delete_edge(NodeId u, NodeId v);
  std::optional<Weight> weight(NodeId u, NodeId v) const;
  bool contains(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

  /// Sorted ascending.
  std::vector<NodeId> successors(NodeId u) const;

  template <class F>
  void for_each_successor(NodeId u, F&& f) const {
    auto it = adjacency_.find(u);
    if (it == adjacency_.end()) return;
    for (const auto& [v, w] : it->second) f(v, w);
  }

  template <class F>
  void for_each_source(F&& f) const {
    for (const auto& [u, dests] : adjacency_) f(u);
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  /// Sorted by (u, v).
  std::vector<Edge> edges() const;

  /// Sources and destinations, sorted ascending.
  std::vector<NodeId> all_nodes() const;

 private:
  bool weighted_;
  std::unordered_map<NodeId, std::map<NodeId, Weight>> adjacency_;
  std::size_t edges_ = 0;
};

/// Brute-force analytics reject graphs with more nodes than this.
inline constexpr std::size_t kMaxBruteNodes = 1000;

std::vector<NodeId> brute_top_degree(const OracleGraph& g, std::size_t k);
OracleGraph brute_induced(const OracleGraph& g, std::span<const NodeId> nodes);
BfsResult brute_bfs(const OracleGraph& g, NodeId source);
Distances brute_sssp(const OracleGraph& g, NodeId source);
std::uint64_t brute_triangles(const OracleGraph& g, NodeId node,
                              TriangleMode mode = TriangleMode::kMethodology);
Components brute_scc(const OracleGraph& g);
Scores brute_pagerank(const OracleGraph& g, std::size_t iterations = 100, double damping = 0.85);
Scores brute_betweenness(const OracleGraph& g);
Scores brute_lcc(const OracleGraph& g);

/// Same methodology as analytics::run_task, computed with the brute-force
/// routines above.
TaskDigest brute_task(const OracleGraph& g, const TaskSpec& spec);

}  // namespace cuckoograph::oracle

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cuckoograph/types.hpp"

namespace cuckoograph {

struct BfsResult {
  std::vector<NodeId> order;  // visit order, source first

  std::size_t count() const noexcept { return order.size(); }
  friend bool operator==(const BfsResult&, const BfsResult&) = default;
};

/// Shortest distance from the source; unreachable nodes are absent.
using Distances = std::map<NodeId, std::uint64_t>;

/// Per-node score (PageRank, betweenness, clustering coefficient).
using Scores = std::map<NodeId, double>;

/// Each component sorted ascending; components ordered by smallest member.
using Components = std::vector<std::vector<NodeId>>;

/// How triangle_count treats several 2-hop paths closing at the same node.
enum class TriangleMode {
  kMethodology,  // count distinct 2-hop successors s with an edge s -> node
  kDistinct,     // count directed 3-cycles node -> a -> b -> node, all distinct
};

enum class Task { kBfs, kSssp, kTc, kCc, kPr, kBc, kLcc };

std::string_view task_name(Task task) noexcept;

/// Accepts bfs, sssp, tc, cc, pr, bc, lcc (case-insensitive).
Task parse_task(std::string_view name);

/// One analytics run over the top-degree nodes of a graph.
///
/// bfs and tc run from each of the top_k nodes on the whole graph. The other
/// tasks run on the subgraph induced by the top_k nodes; sssp uses the first
/// sssp_sources of those nodes as sources.
struct TaskSpec {
  Task task = Task::kBfs;
  std::size_t top_k = 10;
  std::size_t pr_iterations = 100;
  double pr_damping = 0.85;
  std::size_t sssp_sources = 10;
  TriangleMode tc_mode = TriangleMode::kMethodology;

  void validate() const;
};

/// Order-sensitive fingerprint of task output. Scores are rounded to 1e-9
/// before hashing.
struct TaskDigest {
  std::uint64_t value = 0xcbf29ce484222325ULL;
  std::size_t items = 0;

  void add(std::uint64_t x) noexcept;
  void add_score(double x) noexcept;
  void add(const BfsResult& r);
  void add(const Distances& d);
  void add(const Components& c);
  void add(const Scores& s);

  friend bool operator==(const TaskDigest&, const TaskDigest&) = default;
};

}  // namespace cuckoograph

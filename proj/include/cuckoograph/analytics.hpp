#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cuckoograph/graph.hpp"
#include "cuckoograph/task_results.hpp"

/// Graph analytics written only against successor enumeration and edge
/// queries, so they run unchanged on any store exposing those two calls.
namespace cuckoograph::analytics {

template <class G>
concept GraphView = requires(const G& g, NodeId u) {
  g.for_each_source([](NodeId) {});
  g.for_each_successor(u, [](NodeId, Weight) {});
  { g.contains(u, u) } -> std::convertible_to<bool>;
};

namespace detail {

// Dense renumbering of the node universe (sources and destinations).
struct NodeIndex {
  std::vector<NodeId> ids;  // ascending
  std::unordered_map<NodeId, std::size_t> pos;

  std::size_t size() const noexcept { return ids.size(); }
};

template <GraphView G>
NodeIndex index_nodes(const G& g) {
  std::unordered_set<NodeId> seen;
  g.for_each_source([&](NodeId u) {
    seen.insert(u);
    g.for_each_successor(u, [&](NodeId v, Weight) { seen.insert(v); });
  });
  NodeIndex idx;
  idx.ids.assign(seen.begin(), seen.end());
  std::sort(idx.ids.begin(), idx.ids.end());
  idx.pos.reserve(idx.ids.size());
  for (std::size_t i = 0; i < idx.ids.size(); ++i) idx.pos.emplace(idx.ids[i], i);
  return idx;
}

// Out-adjacency over dense indices, each list ascending.
template <GraphView G>
std::vector<std::vector<std::size_t>> out_lists(const G& g, const NodeIndex& idx) {
  std::vector<std::vector<std::size_t>> adj(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    g.for_each_successor(idx.ids[i], [&](NodeId v, Weight) { adj[i].push_back(idx.pos.at(v)); });
    std::sort(adj[i].begin(), adj[i].end());
  }
  return adj;
}

template <GraphView G>
std::vector<NodeId> sorted_successors(const G& g, NodeId u) {
  std::vector<NodeId> out;
  g.for_each_successor(u, [&](NodeId v, Weight) { out.push_back(v); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Every node that appears as a source or destination, ascending.
template <GraphView G>
std::vector<NodeId> all_nodes(const G& g) {
  return detail::index_nodes(g).ids;
}

/// k nodes by total degree (out + in) descending, ties by ascending id.
template <GraphView G>
std::vector<NodeId> select_top_degree(const G& g, std::size_t k) {
  std::unordered_map<NodeId, std::size_t> degree;
  g.for_each_source([&](NodeId u) {
    g.for_each_successor(u, [&](NodeId v, Weight) {
      ++degree[u];
      ++degree[v];
    });
  });
  if (k > degree.size()) throw std::invalid_argument("k exceeds node count");
  std::vector<std::pair<std::size_t, NodeId>> ranked;
  ranked.reserve(degree.size());
  for (const auto& [id, d] : degree) ranked.emplace_back(d, id);
  auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                    ranked.end(), better);
  std::vector<NodeId> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

/// Subgraph induced on `nodes`, built with the source graph's parameters.
template <bool W>
BasicGraph<W> extract_subgraph(const BasicGraph<W>& g, std::span<const NodeId> nodes) {
  const std::unordered_set<NodeId> keep(nodes.begin(), nodes.end());
  BasicGraph<W> out(g.params());
  std::unordered_set<NodeId> done;
  for (NodeId u : nodes) {
    if (!done.insert(u).second) continue;
    g.for_each_successor(u, [&](NodeId v, Weight w) {
      if (keep.count(v)) out.insert_edge(u, v, w);
    });
  }
  return out;
}

/// Directed BFS; each node's successors are expanded in ascending order.
template <GraphView G>
BfsResult bfs(const G& g, NodeId source) {
  BfsResult out;
  std::unordered_set<NodeId> seen{source};
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    const NodeId a = queue.front();
    queue.pop_front();
    out.order.push_back(a);
    for (NodeId b : detail::sorted_successors(g, a)) {
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  return out;
}

/// Dijkstra with a binary heap. Edge weights are the stored weights, or 1
/// for an unweighted graph.
template <GraphView G>
Distances sssp_dijkstra(const G& g, NodeId source) {
  using Item = std::pair<std::uint64_t, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::unordered_map<NodeId, std::uint64_t> best{{source, 0}};
  Distances done;
  heap.push({0, source});
  while (!heap.empty()) {
    const auto [dist, a] = heap.top();
    heap.pop();
    if (done.count(a)) continue;
    done[a] = dist;
    g.for_each_successor(a, [&](NodeId b, Weight w) {
      const std::uint64_t cand = dist + w;
      auto it = best.find(b);
      if (it == best.end() || cand < it->second) {
        best[b] = cand;
        heap.push({cand, b});
      }
    });
  }
  return done;
}

/// Triangles through `node`. The default mode collects the node's 2-hop
/// successors and counts those with an edge back to it.
template <GraphView G>
std::uint64_t triangle_count(const G& g, NodeId node, TriangleMode mode = TriangleMode::kMethodology) {
  std::uint64_t count = 0;
  if (mode == TriangleMode::kDistinct) {
    g.for_each_successor(node, [&](NodeId a, Weight) {
      if (a == node) return;
      g.for_each_successor(a, [&](NodeId b, Weight) {
        if (b != node && b != a && g.contains(b, node)) ++count;
      });
    });
    return count;
  }
  std::unordered_set<NodeId> two_hop;
  g.for_each_successor(node, [&](NodeId a, Weight) {
    g.for_each_successor(a, [&](NodeId b, Weight) { two_hop.insert(b); });
  });
  for (NodeId b : two_hop) {
    if (g.contains(b, node)) ++count;
  }
  return count;
}

/// Strongly connected components by Tarjan's algorithm (iterative).
template <GraphView G>
Components scc_tarjan(const G& g) {
  const auto idx = detail::index_nodes(g);
  const auto adj = detail::out_lists(g, idx);
  const std::size_t n = idx.size();
  constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> order(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0;
  Components out;

  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != unvisited) continue;
    std::vector<Frame> calls{{root, 0}};
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!calls.empty()) {
      Frame& f = calls.back();
      if (f.next < adj[f.node].size()) {
        const std::size_t w = adj[f.node][f.next++];
        if (order[w] == unvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], order[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().node] = std::min(low[calls.back().node], low[v]);
      if (low[v] != order[v]) continue;
      std::vector<NodeId> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(idx.ids[w]);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Power iteration with uniform teleport; dangling mass is spread uniformly.
template <GraphView G>
Scores pagerank(const G& g, std::size_t iterations = 100, double damping = 0.85) {
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  const auto idx = detail::index_nodes(g);
  const auto adj = detail::out_lists(g, idx);
  const std::size_t n = idx.size();
  Scores out;
  if (n == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (adj[u].empty()) dangling += rank[u];
    }
    std::fill(next.begin(), next.end(), (1.0 - damping) * inv_n + damping * dangling * inv_n);
    for (std::size_t u = 0; u < n; ++u) {
      if (adj[u].empty()) continue;
      const double share = damping * rank[u] / static_cast<double>(adj[u].size());
      for (std::size_t v : adj[u]) next[v] += share;
    }
    rank.swap(next);
  }
  for (std::size_t i = 0; i < n; ++i) out[idx.ids[i]] = rank[i];
  return out;
}

/// Unnormalized directed betweenness, Brandes' dependency accumulation over
/// hop-count shortest paths.
template <GraphView G>
Scores betweenness_brandes(const G& g) {
  const auto idx = detail::index_nodes(g);
  const std::size_t n = idx.size();
  std::vector<double> bc(n, 0.0), sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> visit;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    visit.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      visit.push_back(v);
      g.for_each_successor(idx.ids[v], [&](NodeId wid, Weight) {
        const std::size_t w = idx.pos.at(wid);
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      });
    }
    for (auto it = visit.rbegin(); it != visit.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  Scores out;
  for (std::size_t i = 0; i < n; ++i) out[idx.ids[i]] = bc[i];
  return out;
}

/// Directed local clustering coefficient. Neighbors are in- and
/// out-neighbors (self excluded); the coefficient is the number of directed
/// edges among them over k(k-1), or 0 when k < 2.
template <GraphView G>
Scores lcc(const G& g) {
  const auto idx = detail::index_nodes(g);
  const std::size_t n = idx.size();
  std::vector<std::vector<NodeId>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.for_each_successor(idx.ids[i], [&](NodeId v, Weight) {
      if (v == idx.ids[i]) return;
      nbrs[i].push_back(v);
      nbrs[idx.pos.at(v)].push_back(idx.ids[i]);
    });
  }
  Scores out;
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = nbrs[i];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    const std::size_t k = list.size();
    if (k < 2) {
      out[idx.ids[i]] = 0.0;
      continue;
    }
    std::size_t links = 0;
    for (NodeId a : list) {
      for (NodeId b : list) {
        if (a != b && g.contains(a, b)) ++links;
      }
    }
    out[idx.ids[i]] = static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return out;
}

/// Runs `spec` and folds the results into a digest. `induced` builds the
/// subgraph for the subgraph-based tasks.
template <GraphView G, class MakeSubgraph>
TaskDigest run_task(const G& g, const TaskSpec& spec, MakeSubgraph&& induced) {
  spec.validate();
  TaskDigest digest;
  const auto top = select_top_degree(g, spec.top_k);
  switch (spec.task) {
    case Task::kBfs:
      for (NodeId s : top) digest.add(bfs(g, s));
      break;
    case Task::kTc:
      for (NodeId s : top) {
        digest.add(triangle_count(g, s, spec.tc_mode));
        ++digest.items;
      }
      break;
    case Task::kSssp: {
      const auto sub = induced(g, std::span<const NodeId>(top));
      const std::size_t sources = std::min(spec.sssp_sources, top.size());
      for (std::size_t i = 0; i < sources; ++i) digest.add(sssp_dijkstra(sub, top[i]));
      break;
    }
    case Task::kCc:
      digest.add(scc_tarjan(induced(g, std::span<const NodeId>(top))));
      break;
    case Task::kPr:
      digest.add(pagerank(induced(g, std::span<const NodeId>(top)), spec.pr_iterations,
                          spec.pr_damping));
      break;
    case Task::kBc:
      digest.add(betweenness_brandes(induced(g, std::span<const NodeId>(top))));
      break;
    case Task::kLcc:
      digest.add(lcc(induced(g, std::span<const NodeId>(top))));
      break;
  }
  return digest;
}

template <bool W>
TaskDigest run_task(const BasicGraph<W>& g, const TaskSpec& spec) {
  return run_task(g, spec, [](const BasicGraph<W>& src, std::span<const NodeId> nodes) {
    return extract_subgraph(src, nodes);
  });
}

}  // namespace cuckoograph::analytics

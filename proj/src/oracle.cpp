#include "cuckoograph/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace cuckoograph::oracle {

InsertResult OracleGraph::insert_edge(NodeId u, NodeId v, Weight increment) {
  if (!weighted_) increment = 1;
  auto& dests = adjacency_[u];
  auto [it, fresh] = dests.try_emplace(v, increment);
  if (fresh) {
    ++edges_;
    return {InsertOutcome::kInserted, increment};
  }
  if (!weighted_) return {InsertOutcome::kDuplicate, 1};
  it->second += increment;
  return {InsertOutcome::kIncremented, it->second};
}

DeleteResult OracleGraph::delete_edge(NodeId u, NodeId v) {
  auto src = adjacency_.find(u);
  if (src == adjacency_.end()) return {};
  auto it = src->second.find(v);
  if (it == src->second.end()) return {};
  if (weighted_ && it->second > 1) return {DeleteOutcome::kDecremented, --it->second};
  src->second.erase(it);
  if (src->second.empty()) adjacency_.erase(src);
  --edges_;
  return {DeleteOutcome::kDeleted, 0};
}

std::optional<Weight> OracleGraph::weight(NodeId u, NodeId v) const {
  auto src = adjacency_.find(u);
  if (src == adjacency_.end()) return std::nullopt;
  auto it = src->second.find(v);
  if (it == src->second.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> OracleGraph::successors(NodeId u) const {
  std::vector<NodeId> out;
  for_each_successor(u, [&](NodeId v, Weight) { out.push_back(v); });
  return out;
}

std::vector<Edge> OracleGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [u, dests] : adjacency_) {
    for (const auto& [v, w] : dests) out.push_back({u, v, w});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> OracleGraph::all_nodes() const {
  std::set<NodeId> nodes;
  for (const auto& [u, dests] : adjacency_) {
    nodes.insert(u);
    for (const auto& [v, w] : dests) nodes.insert(v);
  }
  return {nodes.begin(), nodes.end()};
}

namespace {

// Adjacency and weight matrices over the sorted node universe.
struct Dense {
  std::vector<NodeId> ids;
  std::vector<std::vector<Weight>> w;  // 0 = no edge

  explicit Dense(const OracleGraph& g) : ids(g.all_nodes()) {
    if (ids.size() > kMaxBruteNodes) {
      throw std::invalid_argument("graph too large for brute-force analytics");
    }
    w.assign(ids.size(), std::vector<Weight>(ids.size(), 0));
    for (const Edge& e : g.edges()) w[index(e.u)][index(e.v)] = e.w;
  }

  std::size_t n() const { return ids.size(); }
  bool edge(std::size_t a, std::size_t b) const { return w[a][b] != 0; }

  std::size_t index(NodeId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return npos;
    return static_cast<std::size_t>(it - ids.begin());
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

}  // namespace

std::vector<NodeId> brute_top_degree(const OracleGraph& g, std::size_t k) {
  std::map<NodeId, std::size_t> degree;
  for (NodeId id : g.all_nodes()) degree[id] = 0;
  for (const Edge& e : g.edges()) {
    ++degree[e.u];
    ++degree[e.v];
  }
  if (k > degree.size()) throw std::invalid_argument("k exceeds node count");
  std::vector<std::pair<std::size_t, NodeId>> ranked;
  for (const auto& [id, d] : degree) ranked.emplace_back(d, id);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

OracleGraph brute_induced(const OracleGraph& g, std::span<const NodeId> nodes) {
  std::set<NodeId> keep(nodes.begin(), nodes.end());
  OracleGraph out(g.weighted());
  for (const Edge& e : g.edges()) {
    if (keep.count(e.u) && keep.count(e.v)) out.insert_edge(e.u, e.v, e.w);
  }
  return out;
}

BfsResult brute_bfs(const OracleGraph& g, NodeId source) {
  const Dense d(g);
  BfsResult out;
  const std::size_t s = d.index(source);
  if (s == Dense::npos) {
    out.order.push_back(source);
    return out;
  }
  std::vector<bool> seen(d.n(), false);
  std::deque<std::size_t> queue{s};
  seen[s] = true;
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    out.order.push_back(d.ids[a]);
    for (std::size_t b = 0; b < d.n(); ++b) {
      if (d.edge(a, b) && !seen[b]) {
        seen[b] = true;
        queue.push_back(b);
      }
    }
  }
  return out;
}

Distances brute_sssp(const OracleGraph& g, NodeId source) {
  const Dense d(g);
  Distances out;
  const std::size_t s = d.index(source);
  if (s == Dense::npos) {
    out[source] = 0;
    return out;
  }
  constexpr auto inf = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> dist(d.n(), inf);
  std::vector<bool> done(d.n(), false);
  dist[s] = 0;
  for (std::size_t round = 0; round < d.n(); ++round) {
    std::size_t best = Dense::npos;
    for (std::size_t i = 0; i < d.n(); ++i) {
      if (!done[i] && dist[i] != inf && (best == Dense::npos || dist[i] < dist[best])) best = i;
    }
    if (best == Dense::npos) break;
    done[best] = true;
    for (std::size_t j = 0; j < d.n(); ++j) {
      if (!d.edge(best, j)) continue;
      const Weight w = g.weighted() ? d.w[best][j] : 1;
      dist[j] = std::min(dist[j], dist[best] + w);
    }
  }
  for (std::size_t i = 0; i < d.n(); ++i) {
    if (dist[i] != inf) out[d.ids[i]] = dist[i];
  }
  return out;
}

std::uint64_t brute_triangles(const OracleGraph& g, NodeId node, TriangleMode mode) {
  const Dense d(g);
  const std::size_t x = d.index(node);
  if (x == Dense::npos) return 0;
  std::uint64_t count = 0;
  if (mode == TriangleMode::kDistinct) {
    for (std::size_t a = 0; a < d.n(); ++a) {
      for (std::size_t b = 0; b < d.n(); ++b) {
        if (a != x && b != x && a != b && d.edge(x, a) && d.edge(a, b) && d.edge(b, x)) ++count;
      }
    }
    return count;
  }
  std::vector<bool> two_hop(d.n(), false);
  for (std::size_t a = 0; a < d.n(); ++a) {
    for (std::size_t b = 0; b < d.n(); ++b) {
      if (d.edge(x, a) && d.edge(a, b)) two_hop[b] = true;
    }
  }
  for (std::size_t b = 0; b < d.n(); ++b) {
    if (two_hop[b] && d.edge(b, x)) ++count;
  }
  return count;
}

Components brute_scc(const OracleGraph& g) {
  // Kosaraju: finish order on G, then sweep the transpose.
  const Dense d(g);
  const std::size_t n = d.n();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> finish;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    seen[root] = true;
    while (!stack.empty()) {
      auto& [a, next] = stack.back();
      while (next < n && !(d.edge(a, next) && !seen[next])) ++next;
      if (next == n) {
        finish.push_back(a);
        stack.pop_back();
      } else {
        const std::size_t b = next++;
        seen[b] = true;
        stack.push_back({b, 0});
      }
    }
  }
  std::vector<bool> assigned(n, false);
  Components out;
  for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
    if (assigned[*it]) continue;
    std::vector<NodeId> component;
    std::vector<std::size_t> stack{*it};
    assigned[*it] = true;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      component.push_back(d.ids[a]);
      for (std::size_t b = 0; b < n; ++b) {
        if (d.edge(b, a) && !assigned[b]) {
          assigned[b] = true;
          stack.push_back(b);
        }
      }
    }
    std::sort(component.begin(), component.end());
    out.push_back(std::move(component));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Scores brute_pagerank(const OracleGraph& g, std::size_t iterations, double damping) {
  const Dense d(g);
  const std::size_t n = d.n();
  Scores out;
  if (n == 0) return out;
  // Column-stochastic transition matrix; dangling columns are uniform.
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t outdeg = 0;
    for (std::size_t i = 0; i < n; ++i) outdeg += d.edge(j, i) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (outdeg == 0) {
        m[i][j] = 1.0 / static_cast<double>(n);
      } else if (d.edge(j, i)) {
        m[i][j] = 1.0 / static_cast<double>(outdeg);
      }
    }
  }
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> next(n, (1.0 - damping) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * rank[j];
      next[i] += damping * acc;
    }
    rank = std::move(next);
  }
  for (std::size_t i = 0; i < n; ++i) out[d.ids[i]] = rank[i];
  return out;
}

Scores brute_betweenness(const OracleGraph& g) {
  // All-pairs hop distances (Floyd-Warshall) and path counts, then the
  // pair-dependency sum over every (s, t) for every intermediate v.
  const Dense d(g);
  const std::size_t n = d.n();
  constexpr auto inf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    dist[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && d.edge(i, j)) dist[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
      }
    }
  }
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> by_distance;
    for (std::size_t t = 0; t < n; ++t) {
      if (dist[s][t] < inf) by_distance.push_back(t);
    }
    std::sort(by_distance.begin(), by_distance.end(),
              [&](std::size_t a, std::size_t b) { return dist[s][a] < dist[s][b]; });
    sigma[s][s] = 1.0;
    for (std::size_t t : by_distance) {
      if (t == s) continue;
      for (std::size_t p = 0; p < n; ++p) {
        if (p != t && d.edge(p, t) && dist[s][p] + 1 == dist[s][t]) sigma[s][t] += sigma[s][p];
      }
    }
  }
  Scores out;
  for (std::size_t v = 0; v < n; ++v) {
    double bc = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (s == v || dist[s][v] >= inf) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (t == v || t == s || dist[v][t] >= inf) continue;
        if (dist[s][v] + dist[v][t] == dist[s][t]) bc += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
    out[d.ids[v]] = bc;
  }
  return out;
}

Scores brute_lcc(const OracleGraph& g) {
  const Dense d(g);
  const std::size_t n = d.n();
  Scores out;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> nbrs;
    for (std::size_t y = 0; y < n; ++y) {
      if (y != x && (d.edge(x, y) || d.edge(y, x))) nbrs.push_back(y);
    }
    const std::size_t k = nbrs.size();
    if (k < 2) {
      out[d.ids[x]] = 0.0;
      continue;
    }
    std::size_t links = 0;
    for (std::size_t a : nbrs) {
      for (std::size_t b : nbrs) {
        if (a != b && d.edge(a, b)) ++links;
      }
    }
    out[d.ids[x]] = static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return out;
}

TaskDigest brute_task(const OracleGraph& g, const TaskSpec& spec) {
  spec.validate();
  TaskDigest digest;
  const auto top = brute_top_degree(g, spec.top_k);
  const std::span<const NodeId> nodes(top);
  switch (spec.task) {
    case Task::kBfs:
      for (NodeId s : top) digest.add(brute_bfs(g, s));
      break;
    case Task::kTc:
      for (NodeId s : top) {
        digest.add(brute_triangles(g, s, spec.tc_mode));
        ++digest.items;
      }
      break;
    case Task::kSssp: {
      const auto sub = brute_induced(g, nodes);
      const std::size_t sources = std::min(spec.sssp_sources, top.size());
      for (std::size_t i = 0; i < sources; ++i) digest.add(brute_sssp(sub, top[i]));
      break;
    }
    case Task::kCc:
      digest.add(brute_scc(brute_induced(g, nodes)));
      break;
    case Task::kPr:
      digest.add(brute_pagerank(brute_induced(g, nodes), spec.pr_iterations, spec.pr_damping));
      break;
    case Task::kBc:
      digest.add(brute_betweenness(brute_induced(g, nodes)));
      break;
    case Task::kLcc:
      digest.add(brute_lcc(brute_induced(g, nodes)));
      break;
  }
  return digest;
}

}  // namespace cuckoograph::oracle

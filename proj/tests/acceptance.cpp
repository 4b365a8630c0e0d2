// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <ctime>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cuckoograph/analytics.hpp"
#include "cuckoograph/bench.hpp"
#include "cuckoograph/graph.hpp"
#include "cuckoograph/oracle.hpp"

using namespace cuckoograph;
using oracle::OracleGraph;

namespace {

// Pinned limits.
constexpr double kScheduleSeconds = 1.0;
constexpr double kDifferentialSeconds = 60.0;
constexpr double kPlacementsPerInsert = 1.2;
constexpr double kAmortizedSeconds = 30.0;
constexpr double kLambda = 0.5;
constexpr std::size_t kProbeLimit = 6;
constexpr std::size_t kDlScanLimit = 2;
constexpr double kRoundTripSeconds = 30.0;
constexpr std::size_t kDlByteLimit = 8 * 1024;
constexpr double kScoreTolerance = 1e-9;
constexpr double kLccTolerance = 1e-12;
constexpr double kAnalyticsSeconds = 60.0;
constexpr double kMinInsertMops = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Time limits are checked against process CPU time; the wall clock on a
// shared machine also counts time spent descheduled.
struct Stopwatch {
  std::clock_t cpu = std::clock();
  std::chrono::steady_clock::time_point wall = std::chrono::steady_clock::now();

  double cpu_seconds() const { return static_cast<double>(std::clock() - cpu) / CLOCKS_PER_SEC; }
  double wall_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall).count();
  }
  std::string describe() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f s cpu, %.2f s wall", cpu_seconds(), wall_seconds());
    return buf;
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Zipf(1.0) sampler over [0, n).
class ZipfIds {
 public:
  explicit ZipfIds(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
    dist_ = std::discrete_distribution<NodeId>(w.begin(), w.end());
  }
  NodeId operator()(std::mt19937_64& rng) { return dist_(rng); }

 private:
  std::discrete_distribution<NodeId> dist_;
};

Outcome growth_schedule() {
  const Stopwatch watch;
  const std::size_t n = 8;
  using L = std::vector<std::size_t>;
  const std::vector<L> rows{{n},         {n, n / 2},         {n, n / 2, n / 2}, {2 * n, n},
                            {2 * n, n, n}, {4 * n, 2 * n}, {4 * n, 2 * n, 2 * n}, {8 * n, 4 * n}};
  GraphParams p;
  p.s_init = n;
  Graph g(p);
  std::vector<L> seen;
  for (NodeId v = 0; seen.size() < rows.size() && v < 100000; ++v) {
    g.insert_edge(1, v);
    const auto* chain = g.dest_chain(1);
    if (chain == nullptr) continue;
    auto now = chain->lengths();
    if (seen.empty() || seen.back() != now) seen.push_back(std::move(now));
  }
  const double secs = watch.cpu_seconds();
  return {seen == rows && secs < kScheduleSeconds,
          fmt("%zu of 8 rows matched in order, %s", [&] {
            std::size_t k = 0;
            while (k < rows.size() && k < seen.size() && rows[k] == seen[k]) ++k;
            return k;
          }(), watch.describe().c_str())};
}

template <bool W>
bool differential_run(std::uint64_t seed, std::size_t ops, std::string& why) {
  GraphParams p = bench::seeded_params(seed);
  BasicGraph<W> g(p);
  OracleGraph o(W);
  ZipfIds ids(100000);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < ops; ++i) {
    const NodeId u = ids(rng), v = ids(rng);
    const auto roll = rng() % 10;
    if (roll < 6) {
      const auto a = g.insert_edge(u, v);
      const auto b = o.insert_edge(u, v);
      if (a.outcome != b.outcome || a.weight != b.weight) {
        why = fmt("insert mismatch at op %zu", i);
        return false;
      }
    } else if (roll < 9) {
      if (g.weight(u, v) != o.weight(u, v)) {
        why = fmt("query mismatch at op %zu", i);
        return false;
      }
    } else {
      const auto a = g.delete_edge(u, v);
      const auto b = o.delete_edge(u, v);
      if (a.outcome != b.outcome) {
        why = fmt("delete mismatch at op %zu", i);
        return false;
      }
    }
  }
  if (g.edges() != o.edges()) {
    why = "final edge sets differ";
    return false;
  }
  return true;
}

Outcome differential() {
  const Stopwatch watch;
  constexpr std::size_t kOps = 1000000;
  std::string why;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
    ok = differential_run<false>(seed, kOps, why) && differential_run<true>(seed, kOps, why);
    if (!ok) why = fmt("seed %llu: ", static_cast<unsigned long long>(seed)) + why;
  }
  const double secs = watch.cpu_seconds();
  if (ok && secs >= kDifferentialSeconds) why = "too slow";
  return {ok && secs < kDifferentialSeconds,
          fmt("5 seeds x 10^6 ops x 2 modes, %s %s", watch.describe().c_str(), why.c_str())};
}

Outcome amortized_placements() {
  const Stopwatch watch;
  Graph g;
  std::mt19937_64 rng(42);
  std::size_t inserted = 0;
  while (inserted < 1000000) {
    const NodeId u = rng() % 100000, v = rng() % 10000000;
    inserted += g.insert_edge(u, v).outcome == InsertOutcome::kInserted;
  }
  const auto s = g.stats();
  const double l = static_cast<double>(s.l.placements) / static_cast<double>(s.l.inserts);
  const double sl = static_cast<double>(s.s.placements) / static_cast<double>(s.s.inserts);
  const double secs = watch.cpu_seconds();
  return {l <= kPlacementsPerInsert && sl <= kPlacementsPerInsert && secs < kAmortizedSeconds,
          fmt("L %.4f, S %.4f placements per insert (limit %.1f), %s", l, sl,
              kPlacementsPerInsert, watch.describe().c_str())};
}

Outcome movement_bound() {
  std::uint64_t worst_num = 0, worst_den = 1;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g(bench::seeded_params(seed));
    ZipfIds ids(20000);
    std::mt19937_64 rng(seed * 7);
    std::uint64_t n = 0;
    while (n < 100000) {
      n += g.insert_edge(ids(rng), rng() % 1000000).outcome == InsertOutcome::kInserted;
    }
    const auto s = g.stats();
    if (s.dl_overflows != 0) ok = false;  // precondition: denylists never full
    if (s.movements() > 3 * n) ok = false;
    if (s.movements() * worst_den > worst_num * n) {
      worst_num = s.movements();
      worst_den = n;
    }
  }
  return {ok, fmt("worst movements/N = %.3f over 10 runs of N=10^5 (limit 3)",
                  static_cast<double>(worst_num) / static_cast<double>(worst_den))};
}

Outcome memory_bound() {
  GraphParams p;
  p.l_init = 4;
  Graph g(p);
  std::mt19937_64 rng(5);
  std::vector<std::pair<NodeId, NodeId>> live;
  std::size_t qualifying = 0, checked = 0, violations = 0;
  const std::size_t hubs = 40;
  for (std::size_t op = 0; op < 2000000 && qualifying < 100; ++op) {
    if (live.empty() || rng() % 100 < 85) {
      const NodeId u = rng() % hubs, v = rng() % 1000000;
      if (g.insert_edge(u, v).outcome == InsertOutcome::kInserted) live.emplace_back(u, v);
    } else {
      const std::size_t i = rng() % live.size();
      g.delete_edge(live[i].first, live[i].second);
      live[i] = live.back();
      live.pop_back();
    }
    if (op < 20000 || rng() % 2000 != 0) continue;
    ++checked;
    bool stable = g.source_chain().load_rate() >= kLambda;
    g.for_each_source([&](NodeId u) {
      if (const auto* c = g.dest_chain(u)) stable = stable && c->load_rate() >= kLambda;
    });
    if (!stable) continue;
    ++qualifying;
    const auto s = g.stats();
    if (static_cast<double>(s.l_cells) > static_cast<double>(s.node_count) / kLambda ||
        static_cast<double>(s.s_cells) > static_cast<double>(s.edge_count) / kLambda) {
      ++violations;
    }
  }
  return {qualifying == 100 && violations == 0,
          fmt("%zu qualifying checkpoints of %zu sampled, %zu violations", qualifying, checked,
              violations)};
}

Outcome bounded_probes() {
  const auto edges =
      bench::generate_synthetic(bench::SyntheticSpec::parse("zipf:200000:1000000:3"));
  // The second graph uses a kick budget of 1 so that queries also reach
  // populated denylists.
  GraphParams tight;
  tight.max_kicks = 1;
  std::size_t max_l = 0, max_s = 0, max_dl = 0, dl_entries = 0;
  for (const GraphParams& p : {GraphParams{}, tight}) {
    Graph g(p);
    for (const Edge& e : edges) g.insert_edge(e.u, e.v);
    dl_entries += g.source_denylist_size() + g.dest_denylist_size();
    std::mt19937_64 rng(8);
    for (std::size_t i = 0; i < 500000; ++i) {
      NodeId u, v;
      if (i % 2 == 0) {
        const Edge& e = edges[rng() % edges.size()];
        u = e.u;
        v = e.v;
      } else {
        u = rng() % 250000;
        v = rng() % 250000;
      }
      ProbeTrace t;
      g.query_edge(u, v, &t);
      max_l = std::max(max_l, t.l_buckets);
      max_s = std::max(max_s, t.s_buckets);
      max_dl = std::max(max_dl, t.dl_scans);
    }
  }
  return {max_l <= kProbeLimit && max_s <= kProbeLimit && max_dl <= kDlScanLimit,
          fmt("max buckets L %zu, S %zu, DL scans %zu over 10^6 queries (%zu DL entries)",
              max_l, max_s, max_dl, dl_entries)};
}

Outcome round_trip() {
  const Stopwatch watch;
  const auto edges = bench::generate_synthetic(bench::SyntheticSpec::parse("zipf:20000:100000:6"));
  std::string why;
  for (bool random_order : {false, true}) {
    GraphParams p;
    Graph g(p);
    OracleGraph o;
    for (const Edge& e : edges) {
      g.insert_edge(e.u, e.v);
      o.insert_edge(e.u, e.v);
    }
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(11);
    if (random_order) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const Edge& e = edges[i];
      if (g.delete_edge(e.u, e.v).outcome != o.delete_edge(e.u, e.v).outcome) why = "delete";
      if (g.contains(e.u, e.v)) why = "deleted edge still present";
      const Edge& probe = edges[rng() % edges.size()];
      if (g.contains(probe.u, probe.v) != o.contains(probe.u, probe.v)) why = "query disagrees";
      if (!why.empty()) break;
    }
    const auto s = g.stats();
    const std::size_t floor = TableShape::of_length(p.l_init, p.cells_per_bucket).capacity();
    if (why.empty() && (s.edge_count != 0 || s.node_count != 0 || s.l_cells != floor ||
                        s.s_cells != 0 || !g.source_chain().at_floor())) {
      why = "capacity above floor after deleting everything";
    }
    if (!why.empty()) {
      why = (random_order ? "random order: " : "insertion order: ") + why;
      break;
    }
  }
  const double secs = watch.cpu_seconds();
  if (why.empty() && secs >= kRoundTripSeconds) why = "too slow";
  return {why.empty(), fmt("10^5 edges, both orders, %s %s", watch.describe().c_str(), why.c_str())};
}

template <bool W>
std::size_t max_dl_bytes() {
  GraphParams p;
  p.l_init = 4;
  BasicGraph<W> g(p);
  std::mt19937_64 rng(W ? 2 : 1);
  ZipfIds ids(50000);
  std::size_t worst = g.stats().dl_bytes;
  for (std::size_t i = 0; i < 300000; ++i) {
    const NodeId u = ids(rng), v = ids(rng);
    if (rng() % 5 == 0) {
      g.delete_edge(u, v);
    } else {
      g.insert_edge(u, v);
    }
    worst = std::max(worst, g.stats().dl_bytes);
  }
  return worst;
}

Outcome denylist_bytes() {
  const std::size_t a = max_dl_bytes<false>(), b = max_dl_bytes<true>();
  return {a <= kDlByteLimit && b <= kDlByteLimit,
          fmt("max DL bytes %zu unweighted, %zu weighted (limit %zu)", a, b, kDlByteLimit)};
}

bool scores_near(const Scores& a, const Scores& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& [id, x] : b) {
    auto it = a.find(id);
    if (it == a.end() || std::abs(it->second - x) > tol) return false;
  }
  return true;
}

bool analytics_agree(const WeightedGraph& g, const OracleGraph& o) {
  for (NodeId s : o.all_nodes()) {
    if (analytics::bfs(g, s) != oracle::brute_bfs(o, s)) return false;
    if (analytics::sssp_dijkstra(g, s) != oracle::brute_sssp(o, s)) return false;
    if (analytics::triangle_count(g, s) != oracle::brute_triangles(o, s)) return false;
  }
  return analytics::scc_tarjan(g) == oracle::brute_scc(o) &&
         scores_near(analytics::pagerank(g), oracle::brute_pagerank(o), kScoreTolerance) &&
         scores_near(analytics::betweenness_brandes(g), oracle::brute_betweenness(o),
                     kScoreTolerance) &&
         scores_near(analytics::lcc(g), oracle::brute_lcc(o), kLccTolerance);
}

Outcome analytics_correctness() {
  const Stopwatch watch;
  using Edges = std::vector<std::pair<NodeId, NodeId>>;
  std::vector<Edges> graphs{
      {{1, 2}, {2, 3}, {3, 1}},                  // 3-cycle
      {{0, 1}, {0, 2}, {0, 3}, {0, 4}},          // star
      {{1, 2}, {2, 3}, {3, 4}},                  // path
      {{1, 2}, {1, 3}, {2, 4}, {3, 4}, {1, 4}},  // DAG
  };
  std::size_t failed = 0, total = 0;
  for (const auto& edges : graphs) {
    WeightedGraph g;
    OracleGraph o(true);
    for (auto [u, v] : edges) {
      g.insert_edge(u, v);
      o.insert_edge(u, v);
    }
    ++total;
    failed += !analytics_agree(g, o);
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const NodeId n = 100 + 20 * static_cast<NodeId>(seed);  // up to 300 nodes
    WeightedGraph g;
    OracleGraph o(true);
    for (std::size_t i = 0; i < 4 * n; ++i) {
      NodeId u = rng() % n, v = rng() % n;
      if (rng() % 3 == 0) u = rng() % 10;
      const Weight w = 1 + rng() % 5;
      g.insert_edge(u, v, w);
      o.insert_edge(u, v, w);
    }
    ++total;
    failed += !analytics_agree(g, o);
  }
  const double secs = watch.cpu_seconds();
  return {failed == 0 && secs < kAnalyticsSeconds,
          fmt("%zu of %zu graphs agree on bfs/sssp/tc/scc/pr/bc/lcc, %s", total - failed,
              total, watch.describe().c_str())};
}

Outcome insert_throughput() {
  const auto edges =
      bench::generate_synthetic(bench::SyntheticSpec::parse("zipf:200000:1000000:1"));
  bench::Workload w;
  w.phases = {bench::Phase::insert_all()};
  const auto report = bench::run(w, edges);
  const double mops = report.phases[0].mops;
  return {mops > kMinInsertMops, fmt("%.2f Mops inserting 10^6 edges (floor %.1f)", mops,
                                     kMinInsertMops)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"growth-schedule", growth_schedule},
      {"differential-equivalence", differential},
      {"amortized-insertion-attempts", amortized_placements},
      {"movement-bound", movement_bound},
      {"stable-state-memory-bound", memory_bound},
      {"bounded-probes", bounded_probes},
      {"contraction-round-trip", round_trip},
      {"denylist-byte-overhead", denylist_bytes},
      {"analytics-correctness", analytics_correctness},
      {"insert-throughput-smoke", insert_throughput},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    while (!out.detail.empty() && out.detail.back() == ' ') out.detail.pop_back();
    std::printf("%s %2zu %-30s %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

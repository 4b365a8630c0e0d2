#include "cuckoograph/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "cuckoograph/analytics.hpp"

namespace cuckoograph::bench {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view text, T& out, int base = 10) {
  const char* end = text.data() + text.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>) {
    r = std::from_chars(text.data(), end, out);
  } else {
    r = std::from_chars(text.data(), end, out, base);
  }
  return !text.empty() && r.ec == std::errc() && r.ptr == end;
}

template <class T>
T number_or_throw(std::string_view text, std::string_view what) {
  T value{};
  if (!parse_number(text, value)) {
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::uint64_t pair_key(NodeId u, NodeId v, std::size_t n) { return u * n + v; }

void check_node_count(std::size_t nodes) {
  if (nodes < 2) throw std::invalid_argument("synthetic graphs need at least 2 nodes");
  if (nodes > (std::size_t{1} << 32)) throw std::invalid_argument("too many nodes (max 2^32)");
}

// Ordered pair index i in [0, n(n-1)) to an edge without self-loops.
Edge pair_at(std::uint64_t i, std::size_t n) {
  const NodeId u = i / (n - 1);
  const NodeId r = i % (n - 1);
  return {u, r < u ? r : r + 1, 1};
}

std::vector<Edge> generate_dense(const SyntheticSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.nodes;
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1);
  if (spec.edges > pairs) {
    throw std::invalid_argument("dense: edges exceed n(n-1) = " + std::to_string(pairs));
  }
  std::vector<Edge> out;
  out.reserve(spec.edges);
  // Selection sampling: one pass over all pairs, each kept with the exact
  // conditional probability, so the result is a uniform subset.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t needed = spec.edges;
  for (std::uint64_t i = 0; i < pairs && needed > 0; ++i) {
    const double remaining = static_cast<double>(pairs - i);
    if (unit(rng) * remaining < static_cast<double>(needed)) {
      out.push_back(pair_at(i, n));
      --needed;
    }
  }
  return out;
}

std::vector<Edge> generate_sparse(const SyntheticSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.nodes;
  if (spec.edges % n != 0) {
    throw std::invalid_argument("sparse: edges must be a multiple of nodes");
  }
  const std::size_t degree = spec.edges / n;
  if (degree > n - 1) throw std::invalid_argument("sparse: out-degree exceeds n - 1");
  std::vector<Edge> out;
  out.reserve(spec.edges);
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> picks;
  for (NodeId u = 0; u < n; ++u) {
    // Floyd's sampling of `degree` distinct offsets from [0, n-1).
    chosen.clear();
    picks.clear();
    for (std::uint64_t j = n - 1 - degree; j < n - 1; ++j) {
      const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
      const std::uint64_t pick = chosen.insert(t).second ? t : j;
      if (pick == j) chosen.insert(j);
      picks.push_back(pick);
    }
    for (std::uint64_t r : picks) out.push_back({u, r < u ? r : r + 1, 1});
  }
  return out;
}

std::vector<Edge> generate_zipf(const SyntheticSpec& spec, std::mt19937_64& rng) {
  const std::size_t n = spec.nodes;
  const std::uint64_t limit = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (spec.edges > limit) throw std::invalid_argument("zipf: edges exceed n(n-1)/2");
  if (!(spec.zipf_exponent > 0.0)) throw std::invalid_argument("zipf: exponent must be > 0");
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
  }
  std::discrete_distribution<std::size_t> source(weights.begin(), weights.end());
  std::uniform_int_distribution<std::uint64_t> offset(0, n - 2);
  std::vector<std::size_t> out_degree(n, 0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(spec.edges);
  std::vector<Edge> out;
  out.reserve(spec.edges);
  while (out.size() < spec.edges) {
    const NodeId u = source(rng);
    if (out_degree[u] == n - 1) continue;
    const NodeId r = offset(rng);
    const NodeId v = r < u ? r : r + 1;
    if (!seen.insert(pair_key(u, v, n)).second) continue;
    ++out_degree[u];
    out.push_back({u, v, 1});
  }
  return out;
}

std::string digest_suffix(const TaskDigest& d) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d.value));
  return "#" + std::string(buf) + "/" + std::to_string(d.items);
}

constexpr std::string_view kCsvHeader =
    "phase,ops,elapsed_ns,mops,bytes,placements,evictions,dl_hits,movements";
constexpr std::string_view kSamplePrefix = "mem:";

}  // namespace

std::vector<Edge> parse_edges(std::istream& in, bool dedup, std::string_view source) {
  std::vector<Edge> out;
  std::unordered_set<Edge, decltype([](const Edge& e) {
                          return static_cast<std::size_t>(seeded_hash(e.u, e.v));
                        }),
                     decltype([](const Edge& a, const Edge& b) {
                          return a.u == b.u && a.v == b.v;
                        })>
      seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const std::size_t b = rest.find_first_not_of(" \t");
      if (b == std::string_view::npos) break;
      rest.remove_prefix(b);
      const std::size_t e = std::min(rest.find_first_of(" \t"), rest.size());
      fields.push_back(rest.substr(0, e));
      rest.remove_prefix(e);
    }
    Edge edge;
    const bool ok = (fields.size() == 2 || fields.size() == 3) && parse_number(fields[0], edge.u) &&
                    parse_number(fields[1], edge.v) &&
                    (fields.size() == 2 || parse_number(fields[2], edge.w));
    if (!ok) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected 'u v' or 'u v w' with unsigned integers, got '" + line + "'");
    }
    if (edge.u == kVacant || edge.v == kVacant) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": node id 18446744073709551615 is reserved");
    }
    if (fields.size() == 3 && edge.w == 0) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": weight must be >= 1");
    }
    if (dedup && !seen.insert(edge).second) continue;
    out.push_back(edge);
  }
  return out;
}

std::vector<Edge> ingest(const std::filesystem::path& path, bool dedup) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
  return parse_edges(in, dedup, path.string());
}

void write_edges(std::ostream& out, std::span<const Edge> edges, bool weighted) {
  for (const Edge& e : edges) {
    out << e.u << ' ' << e.v;
    if (weighted) out << ' ' << e.w;
    out << '\n';
  }
}

SyntheticSpec SyntheticSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) {
    throw std::invalid_argument("expected kind:nodes:edges:seed, got '" + std::string(text) + "'");
  }
  SyntheticSpec spec;
  if (parts[0] == "dense") {
    spec.kind = SyntheticKind::kDense;
  } else if (parts[0] == "sparse") {
    spec.kind = SyntheticKind::kSparse;
  } else if (parts[0] == "zipf") {
    spec.kind = SyntheticKind::kZipf;
  } else {
    throw std::invalid_argument("unknown synthetic kind: " + std::string(parts[0]));
  }
  spec.nodes = number_or_throw<std::size_t>(parts[1], "node count");
  spec.edges = number_or_throw<std::size_t>(parts[2], "edge count");
  spec.seed = number_or_throw<std::uint64_t>(parts[3], "seed");
  return spec;
}

std::vector<Edge> generate_synthetic(const SyntheticSpec& spec) {
  check_node_count(spec.nodes);
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case SyntheticKind::kDense:
      return generate_dense(spec, rng);
    case SyntheticKind::kSparse:
      return generate_sparse(spec, rng);
    case SyntheticKind::kZipf:
      return generate_zipf(spec, rng);
  }
  throw std::invalid_argument("unknown synthetic kind");
}

Phase Phase::query_all() {
  Phase p;
  p.kind = Kind::kQueryAll;
  return p;
}

Phase Phase::delete_all(DeleteOrder order, std::uint64_t seed) {
  Phase p;
  p.kind = Kind::kDeleteAll;
  p.delete_order = order;
  p.seed = seed;
  return p;
}

Phase Phase::mixed(MixedRatios ratios, std::size_t count, std::uint64_t seed) {
  Phase p;
  p.kind = Kind::kMixed;
  p.ratios = ratios;
  p.count = count;
  p.seed = seed;
  return p;
}

Phase Phase::run(TaskSpec task) {
  Phase p;
  p.kind = Kind::kTask;
  p.task = task;
  return p;
}

std::string Phase::label() const {
  switch (kind) {
    case Kind::kInsertAll:
      return "insert";
    case Kind::kQueryAll:
      return "query";
    case Kind::kDeleteAll:
      return delete_order == DeleteOrder::kRandom ? "delete:random" : "delete";
    case Kind::kMixed:
      return "mixed:" + format_double(ratios.insert) + ":" + format_double(ratios.query) + ":" +
             format_double(ratios.remove) + ":" + std::to_string(count) + ":" +
             std::to_string(seed);
    case Kind::kTask:
      return std::string(task_name(task.task));
  }
  return "?";
}

void Phase::validate() const {
  if (kind == Kind::kMixed) {
    if (ratios.insert < 0 || ratios.query < 0 || ratios.remove < 0) {
      throw std::invalid_argument("mixed ratios must be nonnegative");
    }
    if (std::abs(ratios.insert + ratios.query + ratios.remove - 1.0) > 1e-9) {
      throw std::invalid_argument("mixed ratios must sum to 1");
    }
  }
  if (kind == Kind::kTask) task.validate();
}

std::vector<Phase> parse_phases(std::string_view text, const TaskSpec& task_defaults,
                                DeleteOrder delete_order, std::uint64_t seed) {
  std::vector<Phase> out;
  for (std::string_view item : split(text, ',')) {
    const auto parts = split(item, ':');
    const std::string_view head = parts[0];
    if (head == "insert" && parts.size() == 1) {
      out.push_back(Phase::insert_all());
    } else if (head == "query" && parts.size() == 1) {
      out.push_back(Phase::query_all());
    } else if (head == "delete" && parts.size() == 1) {
      out.push_back(Phase::delete_all(delete_order, seed));
    } else if (head == "mixed" && (parts.size() == 5 || parts.size() == 6)) {
      MixedRatios r{number_or_throw<double>(parts[1], "insert ratio"),
                    number_or_throw<double>(parts[2], "query ratio"),
                    number_or_throw<double>(parts[3], "delete ratio")};
      const auto count = number_or_throw<std::size_t>(parts[4], "mixed op count");
      const auto s = parts.size() == 6 ? number_or_throw<std::uint64_t>(parts[5], "seed") : seed;
      out.push_back(Phase::mixed(r, count, s));
    } else if (parts.size() == 1) {
      TaskSpec spec = task_defaults;
      spec.task = parse_task(head);
      out.push_back(Phase::run(spec));
    } else {
      throw std::invalid_argument("bad phase: '" + std::string(item) + "'");
    }
    out.back().validate();
  }
  return out;
}

void Workload::validate() const {
  if (phases.empty()) throw std::invalid_argument("workload has no phases");
  for (const Phase& p : phases) p.validate();
  params.validate();
}

PhaseResult Report::totals() const {
  PhaseResult t;
  t.phase = "total";
  for (const PhaseResult& p : phases) {
    t.ops += p.ops;
    t.elapsed_ns += p.elapsed_ns;
    t.placements += p.placements;
    t.evictions += p.evictions;
    t.dl_hits += p.dl_hits;
    t.movements += p.movements;
    t.bytes = p.bytes;
  }
  t.mops = t.elapsed_ns == 0 ? 0.0 : static_cast<double>(t.ops) * 1e3 / t.elapsed_ns;
  return t;
}

template <bool W>
Report run(BasicGraph<W>& graph, const Workload& workload, std::span<const Edge> edges) {
  workload.validate();
  Report report;
  std::uint64_t total_ops = 0;
  for (const Phase& phase : workload.phases) {
    const std::string label = phase.label();
    const GraphStats before = graph.stats();
    PhaseResult result;
    result.phase = label;
    std::uint64_t ops = 0;
    auto tick = [&] {
      ++ops;
      ++total_ops;
      if (workload.mem_interval != 0 && total_ops % workload.mem_interval == 0) {
        report.samples.push_back({label, total_ops, graph.stats().bytes});
      }
    };
    auto answer = [&](TaskDigest& digest, const std::optional<Weight>& w) {
      digest.add(w.value_or(0));
      if (w) ++digest.items;
    };

    const auto start = std::chrono::steady_clock::now();
    try {
      switch (phase.kind) {
        case Phase::Kind::kInsertAll:
          for (const Edge& e : edges) {
            graph.insert_edge(e.u, e.v, W ? e.w : 1);
            tick();
          }
          break;
        case Phase::Kind::kQueryAll: {
          TaskDigest digest;
          for (const Edge& e : edges) {
            answer(digest, graph.weight(e.u, e.v));
            tick();
          }
          result.digest = digest;
          break;
        }
        case Phase::Kind::kDeleteAll: {
          std::vector<std::size_t> order(edges.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          if (phase.delete_order == DeleteOrder::kRandom) {
            std::mt19937_64 rng(phase.seed);
            std::shuffle(order.begin(), order.end(), rng);
          }
          for (std::size_t i : order) {
            // Weighted edges are decremented per call; keep going until gone.
            while (graph.delete_edge(edges[i].u, edges[i].v).outcome == DeleteOutcome::kDecremented) {
              tick();
            }
            tick();
          }
          break;
        }
        case Phase::Kind::kMixed: {
          if (edges.empty() && phase.count > 0) {
            throw std::invalid_argument("mixed phase needs a nonempty dataset");
          }
          std::mt19937_64 rng(phase.seed);
          std::uniform_real_distribution<double> coin(0.0, 1.0);
          std::uniform_int_distribution<std::size_t> pick(0, edges.empty() ? 0 : edges.size() - 1);
          TaskDigest digest;
          for (std::size_t i = 0; i < phase.count; ++i) {
            const double c = coin(rng);
            const Edge& e = edges[pick(rng)];
            if (c < phase.ratios.insert) {
              graph.insert_edge(e.u, e.v, W ? e.w : 1);
            } else if (c < phase.ratios.insert + phase.ratios.query) {
              answer(digest, graph.weight(e.u, e.v));
            } else {
              graph.delete_edge(e.u, e.v);
            }
            tick();
          }
          result.digest = digest;
          break;
        }
        case Phase::Kind::kTask: {
          const TaskDigest digest = analytics::run_task(graph, phase.task);
          ops = digest.items;
          result.digest = digest;
          break;
        }
      }
    } catch (const CapacityExhausted& e) {
      throw CapacityExhausted(label + " phase, op " + std::to_string(ops) + ": " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();

    const GraphStats after = graph.stats();
    result.ops = ops;
    result.elapsed_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    result.mops =
        result.elapsed_ns == 0 ? 0.0 : static_cast<double>(ops) * 1e3 / result.elapsed_ns;
    result.bytes = after.bytes;
    result.placements = after.placements() - before.placements();
    result.evictions = after.evictions() - before.evictions();
    result.dl_hits = after.dl_hits - before.dl_hits;
    result.movements = after.movements() - before.movements();
    report.phases.push_back(std::move(result));

    const bool sampled = !report.samples.empty() && report.samples.back().ops == total_ops &&
                         report.samples.back().bytes == after.bytes;
    if (!sampled) report.samples.push_back({label, total_ops, after.bytes});
  }
  return report;
}

template Report run(BasicGraph<false>&, const Workload&, std::span<const Edge>);
template Report run(BasicGraph<true>&, const Workload&, std::span<const Edge>);

Report run(const Workload& workload, std::span<const Edge> edges) {
  if (workload.weighted) {
    WeightedGraph g(workload.params);
    return run(g, workload, edges);
  }
  Graph g(workload.params);
  return run(g, workload, edges);
}

void write_csv(std::ostream& out, const Report& report) {
  out << kCsvHeader << '\n';
  for (const PhaseResult& p : report.phases) {
    out << p.phase << (p.digest ? digest_suffix(*p.digest) : "") << ',' << p.ops << ','
        << p.elapsed_ns << ',' << format_double(p.mops) << ',' << p.bytes << ',' << p.placements
        << ',' << p.evictions << ',' << p.dl_hits << ',' << p.movements << '\n';
  }
  for (const MemorySample& s : report.samples) {
    out << kSamplePrefix << s.phase << ',' << s.ops << ",0,0," << s.bytes << ",0,0,0,0\n";
  }
}

Report read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("csv:1: unexpected header");
  }
  Report report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    auto fail = [&](std::string_view why) {
      return ParseError("csv:" + std::to_string(line_no) + ": " + std::string(why));
    };
    if (f.size() != 9) throw fail("expected 9 columns");
    std::string_view label = f[0];
    if (label.starts_with(kSamplePrefix)) {
      MemorySample s;
      s.phase = std::string(label.substr(kSamplePrefix.size()));
      if (!parse_number(f[1], s.ops) || !parse_number(f[4], s.bytes)) throw fail("bad sample");
      report.samples.push_back(std::move(s));
      continue;
    }
    PhaseResult p;
    const std::size_t hash = label.find('#');
    if (hash != std::string_view::npos) {
      const auto parts = split(label.substr(hash + 1), '/');
      TaskDigest d;
      if (parts.size() != 2 || !parse_number(parts[0], d.value, 16) ||
          !parse_number(parts[1], d.items)) {
        throw fail("bad digest");
      }
      p.digest = d;
      label = label.substr(0, hash);
    }
    p.phase = std::string(label);
    const bool ok = parse_number(f[1], p.ops) && parse_number(f[2], p.elapsed_ns) &&
                    parse_number(f[3], p.mops) && parse_number(f[4], p.bytes) &&
                    parse_number(f[5], p.placements) && parse_number(f[6], p.evictions) &&
                    parse_number(f[7], p.dl_hits) && parse_number(f[8], p.movements);
    if (!ok) throw fail("bad number");
    report.phases.push_back(std::move(p));
  }
  return report;
}

GraphParams seeded_params(std::uint64_t seed, GraphParams base) {
  std::uint64_t state = seed;
  auto next = [&] {
    state += 0x9e3779b97f4a7c15ULL;
    return detail::splitmix64(state);
  };
  base.l_seeds = {next(), next()};
  base.s_seeds = {next(), next()};
  base.victim_rng_seed = next();
  return base;
}

}  // namespace cuckoograph::bench

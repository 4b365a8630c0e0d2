#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cuckoograph/bench.hpp"
#include "cuckoograph/oracle.hpp"

using namespace cuckoograph;
using namespace cuckoograph::bench;

namespace {

std::vector<Edge> parse(const std::string& text, bool dedup = false) {
  std::istringstream in(text);
  return parse_edges(in, dedup, "test");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

GraphParams small_params() {
  GraphParams p;
  p.l_init = 4;
  return p;
}

}  // namespace

TEST(ParseEdges, AcceptsPairsTriplesCommentsAndBlankLines) {
  const auto edges = parse("# header\n% other\n\n1 2\n3\t4 7\r\n  5 6  \n");
  EXPECT_EQ(edges, (std::vector<Edge>{{1, 2, 1}, {3, 4, 7}, {5, 6, 1}}));
}

TEST(ParseEdges, DedupKeepsFirstOccurrence) {
  EXPECT_EQ(parse("1 2 5\n1 2 9\n2 1\n", true), (std::vector<Edge>{{1, 2, 5}, {2, 1, 1}}));
  EXPECT_EQ(parse("1 2\n1 2\n").size(), 2u);
}

TEST(ParseEdges, MalformedLinesNameSourceAndLine) {
  EXPECT_NE(parse_error("1 2\n2 3\n3 x\n").find("test:3:"), std::string::npos);
  EXPECT_NE(parse_error("1\n").find("test:1:"), std::string::npos);
  EXPECT_NE(parse_error("1 2 3 4\n").find("test:1:"), std::string::npos);
  EXPECT_NE(parse_error("1 -2\n").find("test:1:"), std::string::npos);
  EXPECT_NE(parse_error("1 2 0\n").find("test:1:"), std::string::npos);  // zero weight
  // reserved id
  EXPECT_NE(parse_error("1 18446744073709551615\n").find("test:1:"), std::string::npos);
}

TEST(Ingest, MissingFileThrows) {
  EXPECT_ANY_THROW(ingest("/nonexistent/edges.txt", false));
}

TEST(Ingest, WriteThenReadRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "cuckoograph_bench_roundtrip.txt";
  const std::vector<Edge> edges{{1, 2, 3}, {4, 5, 1}};
  {
    std::ofstream out(path);
    write_edges(out, edges, true);
  }
  EXPECT_EQ(ingest(path, false), edges);
  std::ostringstream plain;
  write_edges(plain, edges);
  EXPECT_EQ(plain.str(), "1 2\n4 5\n");
  std::filesystem::remove(path);
}

TEST(SyntheticSpec, Parse) {
  const auto s = SyntheticSpec::parse("zipf:100:500:7");
  EXPECT_EQ(s.kind, SyntheticKind::kZipf);
  EXPECT_EQ(s.nodes, 100u);
  EXPECT_EQ(s.edges, 500u);
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(SyntheticSpec::parse("dense:8:56:1").kind, SyntheticKind::kDense);
  EXPECT_THROW(SyntheticSpec::parse("ring:8:8:1"), std::invalid_argument);
  EXPECT_THROW(SyntheticSpec::parse("zipf:8:8"), std::invalid_argument);
  EXPECT_THROW(SyntheticSpec::parse("zipf:a:8:1"), std::invalid_argument);
}

TEST(Synthetic, SparseGivesUniformOutDegree) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("sparse:5:10:3"));
  ASSERT_EQ(edges.size(), 10u);
  std::map<NodeId, int> out;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges) {
    ++out[e.u];
    EXPECT_NE(e.u, e.v);
    EXPECT_LT(e.v, 5u);
    EXPECT_TRUE(seen.insert({e.u, e.v}).second);
  }
  EXPECT_EQ(out.size(), 5u);
  for (const auto& [u, d] : out) EXPECT_EQ(d, 2) << u;
  EXPECT_THROW(generate_synthetic(SyntheticSpec::parse("sparse:5:11:3")), std::invalid_argument);
  EXPECT_THROW(generate_synthetic(SyntheticSpec::parse("sparse:5:25:3")), std::invalid_argument);
}

TEST(Synthetic, DenseCanFillEveryOrderedPair) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("dense:8:56:1"));
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges) {
    EXPECT_NE(e.u, e.v);
    seen.insert({e.u, e.v});
  }
  EXPECT_EQ(seen.size(), 56u);
  EXPECT_THROW(generate_synthetic(SyntheticSpec::parse("dense:8:57:1")), std::invalid_argument);
}

TEST(Synthetic, ZipfIsSkewed) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("zipf:2000:20000:5"));
  ASSERT_EQ(edges.size(), 20000u);
  std::map<NodeId, std::size_t> out;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges) {
    ++out[e.u];
    EXPECT_NE(e.u, e.v);
    EXPECT_TRUE(seen.insert({e.u, e.v}).second);
  }
  std::vector<std::size_t> degrees;
  for (const auto& [u, d] : out) degrees.push_back(d);
  std::sort(degrees.begin(), degrees.end());
  EXPECT_GT(degrees.back(), 20 * degrees[degrees.size() / 2]);
  EXPECT_THROW(generate_synthetic(SyntheticSpec::parse("zipf:4:7:1")), std::invalid_argument);
}

TEST(Synthetic, DeterministicPerSeed) {
  const auto a = generate_synthetic(SyntheticSpec::parse("zipf:500:2000:9"));
  EXPECT_EQ(a, generate_synthetic(SyntheticSpec::parse("zipf:500:2000:9")));
  EXPECT_NE(a, generate_synthetic(SyntheticSpec::parse("zipf:500:2000:10")));
}

TEST(ParsePhases, AllForms) {
  TaskSpec defaults;
  defaults.top_k = 3;
  const auto phases =
      parse_phases("insert,query,mixed:0.5:0.25:0.25:100:4,bfs,delete", defaults,
                   DeleteOrder::kRandom, 8);
  ASSERT_EQ(phases.size(), 5u);
  EXPECT_EQ(phases[0].kind, Phase::Kind::kInsertAll);
  EXPECT_EQ(phases[1].kind, Phase::Kind::kQueryAll);
  EXPECT_EQ(phases[2].kind, Phase::Kind::kMixed);
  EXPECT_EQ(phases[2].count, 100u);
  EXPECT_EQ(phases[2].seed, 4u);
  EXPECT_EQ(phases[2].label(), "mixed:0.5:0.25:0.25:100:4");
  EXPECT_EQ(phases[3].task.task, Task::kBfs);
  EXPECT_EQ(phases[3].task.top_k, 3u);
  EXPECT_EQ(phases[4].label(), "delete:random");
  EXPECT_EQ(phases[4].seed, 8u);
  EXPECT_THROW(parse_phases("insert,fly"), std::invalid_argument);
  EXPECT_THROW(parse_phases("mixed:0.5:0.5:0.5:10"), std::invalid_argument);
  EXPECT_THROW(parse_phases("insert:1"), std::invalid_argument);
}

TEST(Run, InsertQueryDeleteCounters) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("zipf:3000:30000:2"));
  Workload w;
  w.phases = parse_phases("insert,query,delete");
  w.params = seeded_params(3, small_params());
  Graph g(w.params);
  const Report r = run(g, w, edges);
  ASSERT_EQ(r.phases.size(), 3u);
  const auto& ins = r.phases[0];
  EXPECT_EQ(ins.phase, "insert");
  EXPECT_EQ(ins.ops, edges.size());
  EXPECT_GT(ins.placements, g.stats().l_entries);
  EXPECT_LE(ins.evictions, ins.placements);
  EXPECT_GT(ins.mops, 0.0);
  const auto& q = r.phases[1];
  ASSERT_TRUE(q.digest.has_value());
  EXPECT_EQ(q.digest->items, edges.size());  // every inserted edge answers true
  EXPECT_EQ(q.placements, 0u);
  EXPECT_EQ(q.movements, 0u);
  EXPECT_EQ(r.phases[2].ops, edges.size());
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(g.source_chain().at_floor());
  EXPECT_EQ(r.phases[2].bytes, g.stats().bytes);
  g.verify();
}

TEST(Run, WeightedDeleteDrainsCounters) {
  const std::vector<Edge> edges{{1, 2, 3}, {1, 3, 1}};
  Workload w;
  w.phases = parse_phases("insert,delete");
  w.weighted = true;
  WeightedGraph g;
  const Report r = run(g, w, edges);
  EXPECT_EQ(r.phases[1].ops, 4u);  // three decrements of 1->2, one of 1->3
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Run, MemorySamplesTrackBytes) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("sparse:1000:10000:1"));
  Workload w;
  w.phases = parse_phases("insert,delete");
  w.params = small_params();
  w.mem_interval = 1000;
  const Report r = run(w, edges);
  ASSERT_EQ(r.samples.size(), 20u);  // every 1000 ops; phase ends coincide
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    EXPECT_EQ(r.samples[i].ops, (i + 1) * 1000);
    EXPECT_EQ(r.samples[i].phase, i < 10 ? "insert" : "delete");
  }
  EXPECT_EQ(r.samples[9].bytes, r.phases[0].bytes);
  EXPECT_EQ(r.samples.back().bytes, r.phases[1].bytes);
  EXPECT_LT(r.phases[1].bytes, r.phases[0].bytes);
}

TEST(Run, MixedPhaseIsDeterministicPerSeed) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("zipf:500:3000:3"));
  Workload w;
  w.phases = parse_phases("mixed:0.6:0.3:0.1:5000:7");
  w.params = small_params();
  auto strip = [](Report r) {
    for (auto& p : r.phases) p.elapsed_ns = 0, p.mops = 0;
    return r;
  };
  const Report a = strip(run(w, edges));
  EXPECT_EQ(a, strip(run(w, edges)));
  EXPECT_EQ(a.phases[0].ops, 5000u);
  ASSERT_TRUE(a.phases[0].digest.has_value());
  EXPECT_GT(a.phases[0].digest->items, 0u);
  w.phases = parse_phases("mixed:0.6:0.3:0.1:5000:8");
  EXPECT_NE(a, strip(run(w, edges)));
}

TEST(Run, TaskPhaseMatchesOracle) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("zipf:300:1500:4"));
  oracle::OracleGraph o;
  for (const Edge& e : edges) o.insert_edge(e.u, e.v);
  TaskSpec defaults;
  defaults.top_k = 5;
  Workload w;
  w.phases = parse_phases("insert,bfs,tc", defaults);
  const Report r = run(w, edges);
  TaskSpec spec = defaults;
  spec.task = Task::kBfs;
  EXPECT_EQ(r.phases[1].digest, oracle::brute_task(o, spec));
  EXPECT_EQ(r.phases[1].ops, r.phases[1].digest->items);
  spec.task = Task::kTc;
  EXPECT_EQ(r.phases[2].digest, oracle::brute_task(o, spec));
  EXPECT_EQ(r.phases[2].ops, 5u);
}

TEST(Run, InvalidWorkloadIsRejected) {
  Workload w;
  EXPECT_THROW(run(w, {}), std::invalid_argument);
  w.phases = parse_phases("mixed:1:0:0:10");
  EXPECT_THROW(run(w, {}), std::invalid_argument);
  w.phases = parse_phases("insert");
  w.params.expand_at = 1.5;
  EXPECT_THROW(run(w, {}), std::invalid_argument);
}

TEST(Csv, RoundTripAndTotals) {
  const auto edges = generate_synthetic(SyntheticSpec::parse("zipf:1000:5000:1"));
  Workload w;
  w.phases = parse_phases("insert,query,cc,delete");
  w.mem_interval = 2000;
  const Report r = run(w, edges);
  std::stringstream csv;
  write_csv(csv, r);
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "phase,ops,elapsed_ns,mops,bytes,placements,evictions,dl_hits,movements");
  csv.seekg(0);
  EXPECT_EQ(read_csv(csv), r);

  const auto t = r.totals();
  EXPECT_EQ(t.ops, r.phases[0].ops + r.phases[1].ops + r.phases[2].ops + r.phases[3].ops);
  EXPECT_EQ(t.bytes, r.phases.back().bytes);
  EXPECT_EQ(t.placements, r.phases[0].placements + r.phases[3].placements);
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_csv(bad_header), ParseError);
  std::istringstream short_row(
      "phase,ops,elapsed_ns,mops,bytes,placements,evictions,dl_hits,movements\ninsert,1,2\n");
  EXPECT_THROW(read_csv(short_row), ParseError);
}

TEST(SeededParams, DerivesDistinctSeeds) {
  const auto a = seeded_params(1), b = seeded_params(2);
  EXPECT_NE(a.l_seeds, b.l_seeds);
  EXPECT_NE(a.l_seeds, a.s_seeds);
  EXPECT_NE(a.victim_rng_seed, b.victim_rng_seed);
  EXPECT_EQ(a, seeded_params(1));
  EXPECT_NO_THROW(a.validate());
  GraphParams base;
  base.cells_per_bucket = 4;
  EXPECT_EQ(seeded_params(1, base).cells_per_bucket, 4u);
}

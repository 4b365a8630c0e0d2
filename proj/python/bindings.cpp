#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "cuckoograph/analytics.hpp"
#include "cuckoograph/bench.hpp"
#include "cuckoograph/graph.hpp"

namespace py = pybind11;
using namespace cuckoograph;

namespace {

TaskSpec make_spec(const std::string& task, std::size_t top_k) {
  TaskSpec spec;
  spec.task = parse_task(task);
  spec.top_k = top_k;
  return spec;
}

template <bool W>
void bind_graph(py::module_& m, const char* name) {
  using G = BasicGraph<W>;
  py::class_<G> cls(m, name);
  cls.def(py::init<GraphParams>(), py::arg("params") = GraphParams{})
      .def("insert_edge", &G::insert_edge, py::arg("u"), py::arg("v"), py::arg("increment") = 1)
      .def(
          "insert_edges",
          [](G& g, const std::vector<std::vector<NodeId>>& edges) {
            std::size_t fresh = 0;
            for (const auto& e : edges) {
              if (e.size() != 2 && e.size() != 3) {
                throw py::value_error("each edge must be (u, v) or (u, v, w)");
              }
              const Weight w = e.size() == 3 ? e[2] : 1;
              fresh += g.insert_edge(e[0], e[1], w).outcome == InsertOutcome::kInserted;
            }
            return fresh;
          },
          py::arg("edges"), "Inserts each edge; returns how many were new.")
      .def("query_edge", [](const G& g, NodeId u, NodeId v) { return g.query_edge(u, v); })
      .def("weight", [](const G& g, NodeId u, NodeId v) { return g.weight(u, v); })
      .def("delete_edge", &G::delete_edge)
      .def("__contains__",
           [](const G& g, std::pair<NodeId, NodeId> e) { return g.contains(e.first, e.second); })
      .def("successors",
           [](const G& g, NodeId u) {
             std::vector<std::pair<NodeId, Weight>> out;
             g.for_each_successor(u, [&](NodeId v, Weight w) { out.emplace_back(v, w); });
             std::sort(out.begin(), out.end());
             return out;
           })
      .def("out_degree", &G::out_degree)
      .def_property_readonly("node_count", &G::node_count)
      .def_property_readonly("edge_count", &G::edge_count)
      .def_property_readonly("params", &G::params)
      .def("__len__", &G::edge_count)
      .def("edges",
           [](const G& g) {
             std::vector<std::tuple<NodeId, NodeId, Weight>> out;
             for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
             return out;
           })
      .def("export_edges",
           [](const G& g) {
             std::ostringstream out;
             g.export_edges(out);
             return out.str();
           })
      .def("stats", &G::stats)
      .def("verify", &G::verify)
      .def(
          "run_task",
          [](const G& g, const std::string& task, std::size_t top_k) {
            const TaskDigest d = analytics::run_task(g, make_spec(task, top_k));
            return py::make_tuple(d.value, d.items);
          },
          py::arg("task"), py::arg("top_k") = 10,
          "Runs bfs/sssp/tc/cc/pr/bc/lcc over the top-k nodes; returns (digest, items).")
      .def("bfs", [](const G& g, NodeId s) { return analytics::bfs(g, s).order; })
      .def("sssp", [](const G& g, NodeId s) { return analytics::sssp_dijkstra(g, s); })
      .def("triangle_count", [](const G& g, NodeId s) { return analytics::triangle_count(g, s); })
      .def("scc", [](const G& g) { return analytics::scc_tarjan(g); })
      .def(
          "pagerank",
          [](const G& g, std::size_t iterations, double damping) {
            return analytics::pagerank(g, iterations, damping);
          },
          py::arg("iterations") = 100, py::arg("damping") = 0.85)
      .def("betweenness", [](const G& g) { return analytics::betweenness_brandes(g); })
      .def("lcc", [](const G& g) { return analytics::lcc(g); })
      .def("top_degree", [](const G& g, std::size_t k) { return analytics::select_top_degree(g, k); });
}

py::dict phase_dict(const bench::PhaseResult& p) {
  py::dict d;
  d["phase"] = p.phase;
  d["ops"] = p.ops;
  d["elapsed_ns"] = p.elapsed_ns;
  d["mops"] = p.mops;
  d["bytes"] = p.bytes;
  d["placements"] = p.placements;
  d["evictions"] = p.evictions;
  d["dl_hits"] = p.dl_hits;
  d["movements"] = p.movements;
  if (p.digest) d["digest"] = py::make_tuple(p.digest->value, p.digest->items);
  return d;
}

std::vector<Edge> to_edges(const std::vector<std::vector<NodeId>>& in) {
  std::vector<Edge> out;
  out.reserve(in.size());
  for (const auto& e : in) {
    if (e.size() != 2 && e.size() != 3) throw py::value_error("each edge must be (u, v) or (u, v, w)");
    out.push_back({e[0], e[1], e.size() == 3 ? e[2] : 1});
  }
  return out;
}

py::list from_edges(const std::vector<Edge>& edges) {
  py::list out;
  for (const Edge& e : edges) out.append(py::make_tuple(e.u, e.v, e.w));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic directed graph store built on chained cuckoo hash tables";

  py::register_exception<CapacityExhausted>(m, "CapacityExhausted", PyExc_RuntimeError);
  py::register_exception<bench::ParseError>(m, "ParseError", PyExc_ValueError);

  py::enum_<InsertOutcome>(m, "InsertOutcome")
      .value("INSERTED", InsertOutcome::kInserted)
      .value("DUPLICATE", InsertOutcome::kDuplicate)
      .value("INCREMENTED", InsertOutcome::kIncremented);
  py::enum_<DeleteOutcome>(m, "DeleteOutcome")
      .value("DELETED", DeleteOutcome::kDeleted)
      .value("ABSENT", DeleteOutcome::kAbsent)
      .value("DECREMENTED", DeleteOutcome::kDecremented);

  py::class_<InsertResult>(m, "InsertResult")
      .def_readonly("outcome", &InsertResult::outcome)
      .def_readonly("weight", &InsertResult::weight);
  py::class_<DeleteResult>(m, "DeleteResult")
      .def_readonly("outcome", &DeleteResult::outcome)
      .def_readonly("weight", &DeleteResult::weight);

  py::class_<GraphParams>(m, "GraphParams")
      .def(py::init<>())
      .def_readwrite("cells_per_bucket", &GraphParams::cells_per_bucket)
      .def_readwrite("expand_at", &GraphParams::expand_at)
      .def_readwrite("contract_at", &GraphParams::contract_at)
      .def_readwrite("max_kicks", &GraphParams::max_kicks)
      .def_readwrite("l_init", &GraphParams::l_init)
      .def_readwrite("s_init", &GraphParams::s_init)
      .def_readwrite("dl_capacity", &GraphParams::dl_capacity)
      .def_readwrite("victim_rng_seed", &GraphParams::victim_rng_seed)
      .def("validate", &GraphParams::validate)
      .def_static(
          "seeded", [](std::uint64_t seed) { return bench::seeded_params(seed); }, py::arg("seed"),
          "Defaults with every hash and RNG seed derived from `seed`.");

  py::class_<LevelCounters>(m, "LevelCounters")
      .def_readonly("inserts", &LevelCounters::inserts)
      .def_readonly("placements", &LevelCounters::placements)
      .def_readonly("evictions", &LevelCounters::evictions)
      .def_readonly("movements", &LevelCounters::movements)
      .def_readonly("failures", &LevelCounters::failures);

  py::class_<GraphStats>(m, "GraphStats")
      .def_readonly("node_count", &GraphStats::node_count)
      .def_readonly("edge_count", &GraphStats::edge_count)
      .def_readonly("l_cells", &GraphStats::l_cells)
      .def_readonly("s_cells", &GraphStats::s_cells)
      .def_readonly("l_entries", &GraphStats::l_entries)
      .def_readonly("s_entries", &GraphStats::s_entries)
      .def_readonly("inline_entries", &GraphStats::inline_entries)
      .def_readonly("l_dl_entries", &GraphStats::l_dl_entries)
      .def_readonly("s_dl_entries", &GraphStats::s_dl_entries)
      .def_readonly("chains", &GraphStats::chains)
      .def_readonly("l_load_rate", &GraphStats::l_load_rate)
      .def_readonly("s_load_rate", &GraphStats::s_load_rate)
      .def_readonly("dl_bytes", &GraphStats::dl_bytes)
      .def_readonly("bytes", &GraphStats::bytes)
      .def_readonly("l", &GraphStats::l)
      .def_readonly("s", &GraphStats::s)
      .def_readonly("bucket_accesses", &GraphStats::bucket_accesses)
      .def_readonly("dl_hits", &GraphStats::dl_hits)
      .def_readonly("dl_overflows", &GraphStats::dl_overflows)
      .def_property_readonly("placements", &GraphStats::placements)
      .def_property_readonly("evictions", &GraphStats::evictions)
      .def_property_readonly("movements", &GraphStats::movements);

  bind_graph<false>(m, "Graph");
  bind_graph<true>(m, "WeightedGraph");

  m.def(
      "generate", [](const std::string& spec) {
        return from_edges(bench::generate_synthetic(bench::SyntheticSpec::parse(spec)));
      },
      py::arg("spec"), "Synthetic edges from 'kind:nodes:edges:seed' (dense, sparse, zipf).");
  m.def(
      "load_edges",
      [](const std::filesystem::path& path, bool dedup) {
        return from_edges(bench::ingest(path, dedup));
      },
      py::arg("path"), py::arg("dedup") = false);
  m.def(
      "run_benchmark",
      [](const std::vector<std::vector<NodeId>>& edges, const std::string& phases,
         bool weighted, std::uint64_t seed, std::size_t top_k, std::size_t mem_interval,
         const GraphParams& params) {
        TaskSpec defaults;
        defaults.top_k = top_k;
        bench::Workload w;
        w.phases = bench::parse_phases(phases, defaults, bench::DeleteOrder::kInsertion, seed);
        w.weighted = weighted;
        w.params = bench::seeded_params(seed, params);
        w.mem_interval = mem_interval;
        const auto data = to_edges(edges);
        bench::Report report;
        {
          py::gil_scoped_release release;
          report = bench::run(w, data);
        }
        py::list rows;
        for (const auto& p : report.phases) rows.append(phase_dict(p));
        return rows;
      },
      py::arg("edges"), py::arg("phases") = "insert,query,delete", py::arg("weighted") = false,
      py::arg("seed") = 1, py::arg("top_k") = 10, py::arg("mem_interval") = 0,
      py::arg("params") = GraphParams{},
      "Runs the benchmark phases and returns one dict per phase.");
}

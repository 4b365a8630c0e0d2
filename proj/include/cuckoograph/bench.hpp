#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cuckoograph/graph.hpp"
#include "cuckoograph/task_results.hpp"

/// Benchmark harness: edge-list ingest, synthetic datasets, phased workloads
/// and CSV reports.
namespace cuckoograph::bench {

/// Input that cannot be parsed. The message names the source and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads "u v" or "u v w" lines. Blank lines and lines starting with '#' or
/// '%' are skipped. With `dedup`, repeated ⟨u,v⟩ pairs after the first are
/// dropped.
std::vector<Edge> parse_edges(std::istream& in, bool dedup, std::string_view source = "<stream>");
std::vector<Edge> ingest(const std::filesystem::path& path, bool dedup);

/// Writes "u v" lines, or "u v w" when `weighted`.
void write_edges(std::ostream& out, std::span<const Edge> edges, bool weighted = false);

enum class SyntheticKind { kDense, kSparse, kZipf };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kSparse;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t seed = 1;
  double zipf_exponent = 1.2;

  /// Parses "kind:nodes:edges:seed", kind one of dense, sparse, zipf.
  static SyntheticSpec parse(std::string_view text);
};

/// Deterministic for a given spec. No self-loops and no duplicate edges.
///   dense:  `edges` pairs drawn uniformly from all n(n-1) ordered pairs.
///   sparse: every node gets out-degree edges/nodes (must divide evenly).
///   zipf:   source of each edge drawn with weight 1/rank^s, destination
///           uniform; requires edges <= n(n-1)/2.
/// Throws std::invalid_argument for infeasible parameters.
std::vector<Edge> generate_synthetic(const SyntheticSpec& spec);

enum class DeleteOrder { kInsertion, kRandom };

struct MixedRatios {
  double insert = 0.6;
  double query = 0.3;
  double remove = 0.1;
};

struct Phase {
  enum class Kind { kInsertAll, kQueryAll, kDeleteAll, kMixed, kTask };

  Kind kind = Kind::kInsertAll;
  DeleteOrder delete_order = DeleteOrder::kInsertion;  // kDeleteAll
  MixedRatios ratios;                                  // kMixed
  std::size_t count = 0;                               // kMixed
  std::uint64_t seed = 1;                              // kMixed, random delete order
  TaskSpec task;                                       // kTask

  static Phase insert_all() { return {}; }
  static Phase query_all();
  static Phase delete_all(DeleteOrder order = DeleteOrder::kInsertion, std::uint64_t seed = 1);
  static Phase mixed(MixedRatios ratios, std::size_t count, std::uint64_t seed);
  static Phase run(TaskSpec task);

  std::string label() const;
  void validate() const;
};

/// Parses a comma-separated phase list:
///   insert | query | delete | mixed:<ins>:<qry>:<del>:<count>[:<seed>] | <task>
/// where <task> is bfs, sssp, tc, cc, pr, bc or lcc. `task_defaults` supplies
/// top_k and the other task settings; `delete_order` and `seed` apply to
/// delete and mixed phases.
std::vector<Phase> parse_phases(std::string_view text, const TaskSpec& task_defaults = {},
                                DeleteOrder delete_order = DeleteOrder::kInsertion,
                                std::uint64_t seed = 1);

struct Workload {
  std::vector<Phase> phases;
  bool weighted = false;
  GraphParams params;
  std::size_t mem_interval = 0;  // ops between memory samples; 0 samples only at phase ends

  void validate() const;
};

struct PhaseResult {
  std::string phase;
  std::uint64_t ops = 0;
  std::uint64_t elapsed_ns = 0;
  double mops = 0.0;
  std::size_t bytes = 0;  // accounted bytes at the end of the phase
  std::uint64_t placements = 0;
  std::uint64_t evictions = 0;
  std::uint64_t dl_hits = 0;
  std::uint64_t movements = 0;
  // Query answers for query/mixed phases, task output for task phases.
  std::optional<TaskDigest> digest;

  friend bool operator==(const PhaseResult&, const PhaseResult&) = default;
};

struct MemorySample {
  std::string phase;
  std::uint64_t ops = 0;  // ops processed since the start of the run
  std::size_t bytes = 0;

  friend bool operator==(const MemorySample&, const MemorySample&) = default;
};

struct Report {
  std::vector<PhaseResult> phases;
  std::vector<MemorySample> samples;

  /// Sum of per-phase counters.
  PhaseResult totals() const;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Runs the phases in order against `graph`, which keeps the final state.
/// CapacityExhausted is rethrown with the phase and op index prepended.
template <bool W>
Report run(BasicGraph<W>& graph, const Workload& workload, std::span<const Edge> edges);

/// Builds a fresh graph from workload.params and runs the workload on it.
Report run(const Workload& workload, std::span<const Edge> edges);

extern template Report run(BasicGraph<false>&, const Workload&, std::span<const Edge>);
extern template Report run(BasicGraph<true>&, const Workload&, std::span<const Edge>);

/// CSV with columns phase, ops, elapsed_ns, mops, bytes, placements,
/// evictions, dl_hits, movements. Phase rows come first. A digest is appended
/// to the phase label as "#<hex>/<items>". Memory samples follow as rows whose
/// label is "mem:<phase>", with only ops and bytes filled in.
void write_csv(std::ostream& out, const Report& report);
Report read_csv(std::istream& in);

/// Graph parameters with every hash and RNG seed derived from `seed`.
GraphParams seeded_params(std::uint64_t seed, GraphParams base = {});

}  // namespace cuckoograph::bench

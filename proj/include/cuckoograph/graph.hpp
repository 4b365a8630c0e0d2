#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "cuckoograph/cuckoo_table.hpp"
#include "cuckoograph/transform_chain.hpp"
#include "cuckoograph/types.hpp"

namespace cuckoograph {

/// Raised when a denylist is full and a forced expansion still cannot house
/// an entry. The graph never drops an edge silently.
class CapacityExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphParams {
  std::size_t cells_per_bucket = 8;  // d
  std::size_t large_slots = 3;       // R, only 3 is supported
  double expand_at = 0.9;            // G
  double contract_at = 0.5;          // Λ
  std::size_t max_kicks = 250;       // T
  std::size_t l_init = 1024;         // initial source-table length
  std::size_t s_init = 4;            // initial destination-table length
  std::size_t dl_capacity = 64;      // entries per denylist
  HashPair l_seeds{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL};
  HashPair s_seeds{0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL};
  std::uint64_t victim_rng_seed = 0x452821e638d01377ULL;

  void validate() const;
  friend bool operator==(const GraphParams&, const GraphParams&) = default;
};

struct Dest {
  NodeId v = kVacant;
  NodeId key() const noexcept { return v; }
  friend bool operator==(const Dest&, const Dest&) = default;
};

struct WeightedDest {
  NodeId v = kVacant;
  Weight w = 0;
  NodeId key() const noexcept { return v; }
  friend bool operator==(const WeightedDest&, const WeightedDest&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Weight w = 1;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Buckets and denylists touched by one query.
struct ProbeTrace {
  std::size_t l_buckets = 0;
  std::size_t s_buckets = 0;
  std::size_t dl_scans = 0;
};

/// Structure-accounted byte sizes. A source cell is the node id plus 2R small
/// slots; a destination cell is one id (plus a weight in weighted mode).
inline constexpr std::size_t kSourceCellBytes = sizeof(NodeId) * (1 + 2 * kChainTables);
inline constexpr std::size_t kChainHeaderBytes = 16;
template <bool Weighted>
inline constexpr std::size_t kDestCellBytes = Weighted ? sizeof(NodeId) + sizeof(Weight)
                                                       : sizeof(NodeId);

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t l_cells = 0;    // cell capacity of the source-table chain
  std::size_t s_cells = 0;    // cell capacity of all destination chains
  std::size_t l_entries = 0;  // sources held in tables
  std::size_t s_entries = 0;  // destinations held in tables
  std::size_t inline_entries = 0;
  std::size_t l_dl_entries = 0;
  std::size_t s_dl_entries = 0;
  std::size_t chains = 0;
  double l_load_rate = 0.0;
  double s_load_rate = 0.0;
  std::size_t dl_bytes = 0;
  std::size_t bytes = 0;
  LevelCounters l;
  LevelCounters s;
  std::uint64_t bucket_accesses = 0;
  std::uint64_t dl_hits = 0;
  std::uint64_t dl_overflows = 0;  // forced expansions because a denylist was full

  std::uint64_t placements() const noexcept { return l.placements + s.placements; }
  std::uint64_t evictions() const noexcept { return l.evictions + s.evictions; }
  std::uint64_t movements() const noexcept { return l.movements + s.movements; }
};

enum class InsertOutcome { kInserted, kDuplicate, kIncremented };
enum class DeleteOutcome { kDeleted, kAbsent, kDecremented };

struct InsertResult {
  InsertOutcome outcome = InsertOutcome::kInserted;
  Weight weight = 1;  // weight after the call
};

struct DeleteResult {
  DeleteOutcome outcome = DeleteOutcome::kAbsent;
  Weight weight = 0;  // weight left after the call
};

namespace detail {

class RelaxedCounter {
 public:
  RelaxedCounter() = default;
  RelaxedCounter(const RelaxedCounter& o) noexcept : value_(o.load()) {}
  RelaxedCounter& operator=(const RelaxedCounter& o) noexcept {
    value_.store(o.load(), std::memory_order_relaxed);
    return *this;
  }
  void add(std::uint64_t n) const noexcept { value_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t load() const noexcept { return value_.load(std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> value_{0};
};

}  // namespace detail

/// Dynamic directed graph on two levels of cuckoo hashing.
///
/// Source nodes live in cells of a transformable chain of tables. Each cell
/// keeps up to 2R destinations inline (R in weighted mode); past that it
/// owns a chain of destination tables. Insertions that run out of kicks go
/// to a bounded denylist per level, which is drained whenever the owning
/// chain expands.
///
/// Mutations require exclusive access. Const members may run concurrently
/// with each other.
template <bool Weighted>
class BasicGraph {
 public:
  using DestEntry = std::conditional_t<Weighted, WeightedDest, Dest>;
  using DestChain = TransformChain<DestEntry>;
  using Successor = std::conditional_t<Weighted, WeightedDest, NodeId>;
  using QueryResult = std::conditional_t<Weighted, std::optional<Weight>, bool>;

  static constexpr bool kWeighted = Weighted;
  static constexpr std::size_t kInlineCapacity = Weighted ? kChainTables : 2 * kChainTables;

  struct InlineDests {
    std::array<DestEntry, kInlineCapacity> slots{};
    std::size_t size = 0;
  };

  struct SourceCell {
    NodeId u = kVacant;
    std::size_t degree = 0;
    std::variant<InlineDests, std::unique_ptr<DestChain>> part2;

    NodeId key() const noexcept { return u; }
    DestChain* chain() const noexcept {
      auto* p = std::get_if<std::unique_ptr<DestChain>>(&part2);
      return p ? p->get() : nullptr;
    }
  };

  struct DeniedDest {
    NodeId u = kVacant;
    DestEntry dest;
  };

  explicit BasicGraph(GraphParams params = {});

  BasicGraph(BasicGraph&&) noexcept = default;
  BasicGraph& operator=(BasicGraph&&) noexcept = default;
  BasicGraph(const BasicGraph&) = delete;
  BasicGraph& operator=(const BasicGraph&) = delete;

  /// Adds ⟨u,v⟩. In weighted mode a present edge gains `increment`.
  InsertResult insert_edge(NodeId u, NodeId v, Weight increment = 1);

  QueryResult query_edge(NodeId u, NodeId v, ProbeTrace* trace = nullptr) const {
    auto w = weight(u, v, trace);
    if constexpr (Weighted) {
      return w;
    } else {
      return w.has_value();
    }
  }

  bool contains(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

  /// Weight of ⟨u,v⟩ (always 1 when unweighted), or nullopt if absent.
  std::optional<Weight> weight(NodeId u, NodeId v, ProbeTrace* trace = nullptr) const;

  /// Removes ⟨u,v⟩. In weighted mode this decrements and removes at zero.
  DeleteResult delete_edge(NodeId u, NodeId v);

  std::vector<Successor> successors(NodeId u) const;

  /// Calls f(v, w) for every edge ⟨u,v⟩.
  template <class F>
  void for_each_successor(NodeId u, F&& f) const {
    const SourceCell* cell = find_source(u, nullptr);
    if (cell == nullptr) return;
    auto emit = [&](const DestEntry& d) {
      if constexpr (Weighted) {
        f(d.v, d.w);
      } else {
        f(d.v, Weight{1});
      }
    };
    if (const DestChain* chain = cell->chain()) {
      chain->for_each(emit);
      for (const auto& denied : s_deny_) {
        if (denied.u == u) emit(denied.dest);
      }
    } else {
      const auto& in = std::get<InlineDests>(cell->part2);
      for (std::size_t i = 0; i < in.size; ++i) emit(in.slots[i]);
    }
  }

  /// Calls f(u) for every node with at least one outgoing edge.
  template <class F>
  void for_each_source(F&& f) const {
    sources_.for_each([&](const SourceCell& c) { f(c.u); });
    for (const auto& c : l_deny_) f(c.u);
  }

  std::size_t out_degree(NodeId u) const;
  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t edge_count() const noexcept { return edges_; }

  GraphStats stats() const;
  const GraphParams& params() const noexcept { return params_; }

  const TransformChain<SourceCell>& source_chain() const noexcept { return sources_; }

  /// Destination chain of u, or nullptr while u's destinations are inline.
  const DestChain* dest_chain(NodeId u) const;

  /// Calls f(u, chain) for every promoted source node.
  template <class F>
  void for_each_chain(F&& f) const {
    auto visit = [&](const SourceCell& c) {
      if (const DestChain* chain = c.chain()) f(c.u, *chain);
    };
    sources_.for_each(visit);
    for (const auto& c : l_deny_) visit(c);
  }

  std::size_t source_denylist_size() const noexcept { return l_deny_.size(); }
  std::size_t dest_denylist_size() const noexcept { return s_deny_.size(); }

  /// Every edge, sorted by (u, v).
  std::vector<Edge> edges() const;

  /// Writes one "u v" (weighted: "u v w") line per edge.
  void export_edges(std::ostream& out) const;

  /// Full structural check. Throws std::logic_error describing the first
  /// violation found.
  void verify() const;

 private:
  using SourceChain = TransformChain<SourceCell>;

  struct SourceHit {
    SourceCell* cell = nullptr;
    std::size_t table = 0;
    std::optional<std::size_t> deny_index;
  };

  const SourceCell* find_source(NodeId u, ProbeTrace* trace) const;
  SourceHit locate_source(NodeId u);
  const DestEntry* find_dest(const SourceCell& cell, NodeId v, ProbeTrace* trace) const;

  void place_source(SourceCell cell);
  void deny_source(SourceCell cell);
  void expand_sources();
  void remove_source(const SourceHit& hit);

  void add_dest(SourceCell& cell, DestEntry dest);
  void promote(SourceCell& cell, DestEntry dest);
  void insert_into_chain(NodeId u, DestChain& chain, DestEntry dest);
  void deny_dest(NodeId u, DestChain& chain, DestEntry dest);
  void expand_chain(NodeId u, DestChain& chain);
  void shrink_chain(SourceCell& cell, std::size_t hit_table);
  void demote(SourceCell& cell);
  void release_chain(const DestChain& chain);
  void push_denied_dest(NodeId u, DestEntry dest);

  template <class F>
  decltype(auto) tracked(DestChain& chain, F&& f);

  GraphParams params_;
  std::unique_ptr<ChainConfig> l_config_;
  std::unique_ptr<ChainConfig> s_config_;
  SourceChain sources_;
  std::vector<SourceCell> l_deny_;
  std::vector<DeniedDest> s_deny_;
  VictimRng rng_;

  std::size_t nodes_ = 0;
  std::size_t edges_ = 0;
  std::size_t chains_ = 0;
  std::size_t s_cells_ = 0;
  std::size_t s_entries_ = 0;
  LevelCounters l_counters_;
  LevelCounters s_counters_;
  detail::RelaxedCounter bucket_accesses_;
  detail::RelaxedCounter dl_hits_;
  std::uint64_t dl_overflows_ = 0;
};

using Graph = BasicGraph<false>;
using WeightedGraph = BasicGraph<true>;

extern template class BasicGraph<false>;
extern template class BasicGraph<true>;

}  // namespace cuckoograph

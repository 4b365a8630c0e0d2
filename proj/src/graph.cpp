#include "cuckoograph/graph.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>
#include <unordered_set>

namespace cuckoograph {

void GraphParams::validate() const {
  if (large_slots != kChainTables) {
    throw std::invalid_argument("only R = 3 large slots are supported");
  }
  if (cells_per_bucket == 0) throw std::invalid_argument("d must be >= 1");
  if (max_kicks == 0) throw std::invalid_argument("T must be >= 1");
  if (dl_capacity == 0) throw std::invalid_argument("denylist capacity must be >= 1");
  if (l_init < 4 || l_init % 4 != 0) {
    throw std::invalid_argument("l_init must be a positive multiple of 4");
  }
  if (s_init < 4 || s_init % 4 != 0) {
    throw std::invalid_argument("s_init must be a positive multiple of 4");
  }
  ChainThresholds{expand_at, contract_at}.validate();
  if (l_seeds.seed_1 == l_seeds.seed_2 || s_seeds.seed_1 == s_seeds.seed_2) {
    throw std::invalid_argument("hash seeds within a pair must differ");
  }
}

namespace {

std::unique_ptr<ChainConfig> make_config(const GraphParams& p, std::size_t base, HashPair seeds) {
  p.validate();
  auto c = std::make_unique<ChainConfig>();
  c->base_len = base;
  c->cells_per_bucket = p.cells_per_bucket;
  c->thresholds = {p.expand_at, p.contract_at};
  c->budget = {p.max_kicks};
  c->seeds = seeds;
  return c;
}

void check_id(NodeId id) {
  if (id == kVacant) throw std::invalid_argument("node id 2^64-1 is reserved");
}

[[noreturn]] void broken(const std::string& what) {
  throw std::logic_error("graph invariant violated: " + what);
}

}  // namespace

template <bool W>
BasicGraph<W>::BasicGraph(GraphParams params)
    : params_(params),
      l_config_(make_config(params, params.l_init, params.l_seeds)),
      s_config_(make_config(params, params.s_init, params.s_seeds)),
      sources_(*l_config_),
      rng_(params.victim_rng_seed) {
  l_deny_.reserve(params_.dl_capacity);
  s_deny_.reserve(params_.dl_capacity);
}

template <bool W>
template <class F>
decltype(auto) BasicGraph<W>::tracked(DestChain& chain, F&& f) {
  const std::size_t size_before = chain.size();
  const std::size_t cells_before = chain.capacity();
  struct Restore {
    BasicGraph* g;
    DestChain& c;
    std::size_t size_before, cells_before;
    ~Restore() {
      g->s_entries_ = g->s_entries_ + c.size() - size_before;
      g->s_cells_ = g->s_cells_ + c.capacity() - cells_before;
    }
  } restore{this, chain, size_before, cells_before};
  return f();
}

// ---------------------------------------------------------------- lookups

template <bool W>
auto BasicGraph<W>::find_source(NodeId u, ProbeTrace* trace) const -> const SourceCell* {
  std::size_t probes = 0;
  const SourceCell* cell = sources_.find(u, &probes);
  bucket_accesses_.add(probes);
  if (trace != nullptr) trace->l_buckets += probes;
  if (cell != nullptr || l_deny_.empty()) return cell;
  if (trace != nullptr) ++trace->dl_scans;
  for (const auto& c : l_deny_) {
    if (c.u == u) {
      dl_hits_.add(1);
      return &c;
    }
  }
  return nullptr;
}

template <bool W>
auto BasicGraph<W>::locate_source(NodeId u) -> SourceHit {
  std::size_t probes = 0;
  auto hit = sources_.find(u, &probes);
  bucket_accesses_.add(probes);
  if (hit.entry != nullptr) return {hit.entry, hit.table, std::nullopt};
  for (std::size_t i = 0; i < l_deny_.size(); ++i) {
    if (l_deny_[i].u == u) {
      dl_hits_.add(1);
      return {&l_deny_[i], 0, i};
    }
  }
  return {};
}

template <bool W>
auto BasicGraph<W>::find_dest(const SourceCell& cell, NodeId v, ProbeTrace* trace) const
    -> const DestEntry* {
  if (const DestChain* chain = cell.chain()) {
    std::size_t probes = 0;
    const DestEntry* d = chain->find(v, &probes);
    bucket_accesses_.add(probes);
    if (trace != nullptr) trace->s_buckets += probes;
    if (d != nullptr || s_deny_.empty()) return d;
    if (trace != nullptr) ++trace->dl_scans;
    for (const auto& denied : s_deny_) {
      if (denied.u == cell.u && denied.dest.v == v) {
        dl_hits_.add(1);
        return &denied.dest;
      }
    }
    return nullptr;
  }
  const auto& in = std::get<InlineDests>(cell.part2);
  for (std::size_t i = 0; i < in.size; ++i) {
    if (in.slots[i].v == v) return &in.slots[i];
  }
  return nullptr;
}

template <bool W>
std::optional<Weight> BasicGraph<W>::weight(NodeId u, NodeId v, ProbeTrace* trace) const {
  if (u == kVacant || v == kVacant) return std::nullopt;
  const SourceCell* cell = find_source(u, trace);
  if (cell == nullptr) return std::nullopt;
  const DestEntry* d = find_dest(*cell, v, trace);
  if (d == nullptr) return std::nullopt;
  if constexpr (W) {
    return d->w;
  } else {
    return Weight{1};
  }
}

template <bool W>
auto BasicGraph<W>::successors(NodeId u) const -> std::vector<Successor> {
  std::vector<Successor> out;
  for_each_successor(u, [&](NodeId v, Weight w) {
    if constexpr (W) {
      out.push_back({v, w});
    } else {
      out.push_back(v);
    }
  });
  return out;
}

template <bool W>
std::size_t BasicGraph<W>::out_degree(NodeId u) const {
  const SourceCell* cell = find_source(u, nullptr);
  return cell == nullptr ? 0 : cell->degree;
}

template <bool W>
auto BasicGraph<W>::dest_chain(NodeId u) const -> const DestChain* {
  const SourceCell* cell = find_source(u, nullptr);
  return cell == nullptr ? nullptr : cell->chain();
}

// ------------------------------------------------------------- insertion

template <bool W>
InsertResult BasicGraph<W>::insert_edge(NodeId u, NodeId v, Weight increment) {
  check_id(u);
  check_id(v);
  if constexpr (W) {
    if (increment == 0) throw std::invalid_argument("weight increment must be >= 1");
  } else {
    increment = 1;
  }
  DestEntry dest;
  dest.v = v;
  if constexpr (W) dest.w = increment;

  SourceHit hit = locate_source(u);
  if (hit.cell == nullptr) {
    SourceCell cell;
    cell.u = u;
    cell.degree = 1;
    auto& in = std::get<InlineDests>(cell.part2);
    in.slots[0] = dest;
    in.size = 1;
    place_source(std::move(cell));
    ++nodes_;
    ++edges_;
    return {InsertOutcome::kInserted, increment};
  }

  SourceCell& cell = *hit.cell;
  if (const DestEntry* found = find_dest(cell, v, nullptr)) {
    if constexpr (W) {
      auto* d = const_cast<DestEntry*>(found);
      d->w += increment;
      return {InsertOutcome::kIncremented, d->w};
    } else {
      return {InsertOutcome::kDuplicate, 1};
    }
  }
  add_dest(cell, dest);
  ++edges_;
  return {InsertOutcome::kInserted, increment};
}

template <bool W>
void BasicGraph<W>::place_source(SourceCell cell) {
  if (sources_.should_expand()) expand_sources();
  auto p = sources_.insert(std::move(cell), rng_, l_counters_);
  if (!p.placed()) deny_source(std::move(*p.homeless));
}

template <bool W>
void BasicGraph<W>::deny_source(SourceCell cell) {
  if (l_deny_.size() < params_.dl_capacity) {
    l_deny_.push_back(std::move(cell));
    return;
  }
  ++dl_overflows_;
  expand_sources();
  if (auto left = sources_.place_anywhere(std::move(cell), rng_, l_counters_)) {
    if (l_deny_.size() >= params_.dl_capacity) {
      throw CapacityExhausted("source denylist full after forced expansion");
    }
    l_deny_.push_back(std::move(*left));
  }
}

template <bool W>
void BasicGraph<W>::expand_sources() {
  auto change = sources_.advance(rng_, l_counters_);
  std::vector<SourceCell> waiting = std::move(l_deny_);
  l_deny_.clear();
  l_deny_.reserve(params_.dl_capacity);
  for (auto& cell : waiting) {
    ++l_counters_.movements;
    if (auto left = sources_.place_anywhere(std::move(cell), rng_, l_counters_)) {
      l_deny_.push_back(std::move(*left));
    }
  }
  for (auto& cell : change.homeless) {
    if (l_deny_.size() >= params_.dl_capacity) {
      throw CapacityExhausted("source denylist full while expanding");
    }
    l_deny_.push_back(std::move(cell));
  }
}

template <bool W>
void BasicGraph<W>::add_dest(SourceCell& cell, DestEntry dest) {
  if (DestChain* chain = cell.chain()) {
    insert_into_chain(cell.u, *chain, dest);
  } else {
    auto& in = std::get<InlineDests>(cell.part2);
    if (in.size < kInlineCapacity) {
      in.slots[in.size++] = dest;
    } else {
      promote(cell, dest);
    }
  }
  ++cell.degree;
}

template <bool W>
void BasicGraph<W>::promote(SourceCell& cell, DestEntry dest) {
  InlineDests moving = std::get<InlineDests>(cell.part2);
  auto owned = std::make_unique<DestChain>(*s_config_);
  DestChain& chain = *owned;
  cell.part2 = std::move(owned);
  ++chains_;
  s_cells_ += chain.capacity();
  for (std::size_t i = 0; i < moving.size; ++i) {
    ++s_counters_.movements;
    auto left = tracked(chain, [&] {
      return chain.place_anywhere(moving.slots[i], rng_, s_counters_);
    });
    if (left) deny_dest(cell.u, chain, *left);
  }
  insert_into_chain(cell.u, chain, dest);
}

template <bool W>
void BasicGraph<W>::insert_into_chain(NodeId u, DestChain& chain, DestEntry dest) {
  if (chain.should_expand()) expand_chain(u, chain);
  auto p = tracked(chain, [&] { return chain.insert(dest, rng_, s_counters_); });
  if (!p.placed()) deny_dest(u, chain, *p.homeless);
}

template <bool W>
void BasicGraph<W>::push_denied_dest(NodeId u, DestEntry dest) {
  if (s_deny_.size() >= params_.dl_capacity) {
    throw CapacityExhausted("destination denylist full after forced expansion");
  }
  s_deny_.push_back({u, dest});
}

template <bool W>
void BasicGraph<W>::deny_dest(NodeId u, DestChain& chain, DestEntry dest) {
  if (s_deny_.size() < params_.dl_capacity) {
    s_deny_.push_back({u, dest});
    return;
  }
  ++dl_overflows_;
  expand_chain(u, chain);
  auto left = tracked(chain, [&] { return chain.place_anywhere(dest, rng_, s_counters_); });
  if (left) push_denied_dest(u, *left);
}

template <bool W>
void BasicGraph<W>::expand_chain(NodeId u, DestChain& chain) {
  auto change = tracked(chain, [&] { return chain.advance(rng_, s_counters_); });
  auto mine = std::stable_partition(s_deny_.begin(), s_deny_.end(),
                                    [u](const DeniedDest& d) { return d.u != u; });
  std::vector<DeniedDest> waiting(mine, s_deny_.end());
  s_deny_.erase(mine, s_deny_.end());
  for (auto& denied : waiting) {
    ++s_counters_.movements;
    auto left =
        tracked(chain, [&] { return chain.place_anywhere(denied.dest, rng_, s_counters_); });
    if (left) s_deny_.push_back({u, *left});
  }
  for (auto& d : change.homeless) push_denied_dest(u, d);
}

// -------------------------------------------------------------- deletion

template <bool W>
DeleteResult BasicGraph<W>::delete_edge(NodeId u, NodeId v) {
  if (u == kVacant || v == kVacant) return {};
  SourceHit hit = locate_source(u);
  if (hit.cell == nullptr) return {};
  SourceCell& cell = *hit.cell;

  if (DestChain* chain = cell.chain()) {
    std::size_t probes = 0;
    auto found = chain->find(v, &probes);
    bucket_accesses_.add(probes);
    std::size_t hit_table = chain->table_count() - 1;
    if (found.entry != nullptr) {
      if constexpr (W) {
        if (found.entry->w > 1) return {DeleteOutcome::kDecremented, --found.entry->w};
      }
      hit_table = found.table;
      tracked(*chain, [&] { chain->take(v); });
    } else {
      auto it = std::find_if(s_deny_.begin(), s_deny_.end(), [&](const DeniedDest& d) {
        return d.u == u && d.dest.v == v;
      });
      if (it == s_deny_.end()) return {};
      dl_hits_.add(1);
      if constexpr (W) {
        if (it->dest.w > 1) return {DeleteOutcome::kDecremented, --it->dest.w};
      }
      s_deny_.erase(it);
    }
    --cell.degree;
    --edges_;
    shrink_chain(cell, hit_table);
  } else {
    auto& in = std::get<InlineDests>(cell.part2);
    std::size_t i = 0;
    while (i < in.size && in.slots[i].v != v) ++i;
    if (i == in.size) return {};
    if constexpr (W) {
      if (in.slots[i].w > 1) return {DeleteOutcome::kDecremented, --in.slots[i].w};
    }
    in.slots[i] = in.slots[in.size - 1];
    in.slots[--in.size] = DestEntry{};
    --cell.degree;
    --edges_;
  }

  if (cell.degree == 0) remove_source(hit);
  return {DeleteOutcome::kDeleted, 0};
}

template <bool W>
void BasicGraph<W>::shrink_chain(SourceCell& cell, std::size_t hit_table) {
  DestChain& chain = *cell.chain();
  if (chain.should_contract()) {
    auto change = tracked(chain, [&] { return chain.contract(hit_table, rng_, s_counters_); });
    for (auto& d : change.homeless) deny_dest(cell.u, chain, d);
  }
  if (chain.at_floor() && cell.degree <= kInlineCapacity) demote(cell);
}

template <bool W>
void BasicGraph<W>::demote(SourceCell& cell) {
  DestChain& chain = *cell.chain();
  InlineDests in;
  auto place = [&](const DestEntry& d) {
    ++s_counters_.movements;
    in.slots[in.size++] = d;
  };
  release_chain(chain);
  for (const auto& d : chain.drain()) place(d);
  auto mine = std::stable_partition(s_deny_.begin(), s_deny_.end(),
                                    [&](const DeniedDest& d) { return d.u != cell.u; });
  for (auto it = mine; it != s_deny_.end(); ++it) place(it->dest);
  s_deny_.erase(mine, s_deny_.end());
  cell.part2 = in;
}

template <bool W>
void BasicGraph<W>::release_chain(const DestChain& chain) {
  --chains_;
  s_cells_ -= chain.capacity();
  s_entries_ -= chain.size();
}

template <bool W>
void BasicGraph<W>::remove_source(const SourceHit& hit) {
  const NodeId u = hit.cell->u;
  std::size_t hit_table = sources_.table_count() - 1;
  std::optional<SourceCell> gone;
  if (hit.deny_index) {
    gone = std::move(l_deny_[*hit.deny_index]);
    l_deny_.erase(l_deny_.begin() + static_cast<std::ptrdiff_t>(*hit.deny_index));
  } else {
    hit_table = hit.table;
    gone = sources_.take(u).value().first;
  }
  if (const DestChain* chain = gone->chain()) release_chain(*chain);
  --nodes_;
  if (sources_.should_contract()) {
    auto change = sources_.contract(hit_table, rng_, l_counters_);
    for (auto& c : change.homeless) deny_source(std::move(c));
  }
}

// ----------------------------------------------------------- reporting

template <bool W>
GraphStats BasicGraph<W>::stats() const {
  GraphStats s;
  s.node_count = nodes_;
  s.edge_count = edges_;
  s.l_cells = sources_.capacity();
  s.s_cells = s_cells_;
  s.l_entries = sources_.size();
  s.s_entries = s_entries_;
  s.l_dl_entries = l_deny_.size();
  s.s_dl_entries = s_deny_.size();
  s.inline_entries = edges_ - s_entries_ - s_deny_.size();
  s.chains = chains_;
  s.l_load_rate = sources_.load_rate();
  s.s_load_rate = s_cells_ == 0 ? 0.0 : static_cast<double>(s_entries_) / s_cells_;
  s.dl_bytes = params_.dl_capacity * (kSourceCellBytes + sizeof(NodeId) + kDestCellBytes<W>);
  s.bytes = s.l_cells * kSourceCellBytes + s.s_cells * kDestCellBytes<W> +
            chains_ * kChainHeaderBytes + s.dl_bytes;
  s.l = l_counters_;
  s.s = s_counters_;
  s.bucket_accesses = bucket_accesses_.load();
  s.dl_hits = dl_hits_.load();
  s.dl_overflows = dl_overflows_;
  return s;
}

template <bool W>
std::vector<Edge> BasicGraph<W>::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_);
  for_each_source([&](NodeId u) {
    for_each_successor(u, [&](NodeId v, Weight w) { out.push_back({u, v, w}); });
  });
  std::sort(out.begin(), out.end());
  return out;
}

template <bool W>
void BasicGraph<W>::export_edges(std::ostream& out) const {
  for (const Edge& e : edges()) {
    out << e.u << ' ' << e.v;
    if constexpr (W) out << ' ' << e.w;
    out << '\n';
  }
}

template <bool W>
void BasicGraph<W>::verify() const {
  std::unordered_set<NodeId> seen_u;
  std::size_t degree_sum = 0;
  std::size_t chain_count = 0;
  std::size_t chain_cells = 0;
  std::size_t chain_entries = 0;
  std::set<std::pair<NodeId, NodeId>> denied_edges;
  for (const auto& d : s_deny_) {
    if (!denied_edges.insert({d.u, d.dest.v}).second) broken("duplicate S-DL entry");
  }

  for (std::size_t t = 0; t < sources_.table_count(); ++t) {
    const auto& table = sources_.table(t);
    table.for_each_located([&](const SourceCell& c, CellLocation where) {
      if (table.bucket_index(c.u, where.array) != where.bucket) broken("source off its buckets");
    });
  }

  auto check_cell = [&](const SourceCell& c) {
    if (!seen_u.insert(c.u).second) broken("source stored twice");
    if (c.degree == 0) broken("source without destinations");
    degree_sum += c.degree;
    std::unordered_set<NodeId> seen_v;
    auto check_dest = [&](const DestEntry& d) {
      if (!seen_v.insert(d.v).second) broken("destination stored twice");
      if constexpr (W) {
        if (d.w == 0) broken("zero weight");
      }
    };
    if (const DestChain* chain = c.chain()) {
      ++chain_count;
      chain_cells += chain->capacity();
      chain_entries += chain->size();
      for (std::size_t t = 0; t < chain->table_count(); ++t) {
        const auto& table = chain->table(t);
        table.for_each_located([&](const DestEntry& d, CellLocation where) {
          if (table.bucket_index(d.v, where.array) != where.bucket) {
            broken("destination off its buckets");
          }
          check_dest(d);
        });
      }
      for (const auto& d : s_deny_) {
        if (d.u == c.u) check_dest(d.dest);
      }
    } else {
      const auto& in = std::get<InlineDests>(c.part2);
      if (in.size > kInlineCapacity) broken("inline overflow");
      for (std::size_t i = 0; i < in.size; ++i) check_dest(in.slots[i]);
    }
    if (seen_v.size() != c.degree) broken("degree does not match stored destinations");
  };
  sources_.for_each(check_cell);
  for (const auto& c : l_deny_) check_cell(c);

  for (const auto& d : s_deny_) {
    const SourceCell* c = sources_.find(d.u);
    if (c == nullptr) {
      for (const auto& dc : l_deny_) {
        if (dc.u == d.u) c = &dc;
      }
    }
    if (c == nullptr || c->chain() == nullptr) broken("S-DL entry without a promoted source");
  }
  if (l_deny_.size() > params_.dl_capacity || s_deny_.size() > params_.dl_capacity) {
    broken("denylist over capacity");
  }
  if (seen_u.size() != nodes_) broken("node count");
  if (degree_sum != edges_) broken("edge count");
  if (chain_count != chains_) broken("chain count");
  if (chain_cells != s_cells_) broken("destination cell count");
  if (chain_entries != s_entries_) broken("destination entry count");
}

template class BasicGraph<false>;
template class BasicGraph<true>;

}  // namespace cuckoograph

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cuckoograph/cuckoo_table.hpp"

namespace cuckoograph {

/// Maximum number of tables in one chain. Only the three-table schedule is
/// supported.
inline constexpr std::size_t kChainTables = 3;

/// Expansion threshold G (newest table) and contraction threshold Λ (whole
/// chain). Requires 0 < Λ <= 2G/3 < G < 1.
struct ChainThresholds {
  double expand_at = 0.9;
  double contract_at = 0.5;

  void validate() const;
};

struct ChainConfig {
  std::size_t base_len = 4;
  std::size_t cells_per_bucket = 8;
  ChainThresholds thresholds;
  KickBudget budget;
  HashPair seeds;

  void validate() const;
};

/// Table lengths after `step` expansion events, starting from one table of
/// `base_len` buckets:
///
///   0: n         1: n, n/2      2: n, n/2, n/2
///   3: 2n, n     4: 2n, n, n    5: 4n, 2n   ...
///
/// Throws std::invalid_argument for any table count other than three.
std::vector<std::size_t> lengths_after(std::size_t step, std::size_t base_len,
                                       std::size_t max_tables = kChainTables);

struct ChainState {
  std::size_t step = 0;
  std::vector<std::size_t> lengths;
  std::size_t base_len = 0;

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

enum class ChainEvent {
  kNone,
  kEnabled,
  kMergedAndEnabled,
  kRemoved,
  kHalved,
};

/// Work counters for one level (source cells or destination entries).
struct LevelCounters {
  std::uint64_t inserts = 0;     // fresh items inserted into a table
  std::uint64_t placements = 0;  // cell writes performed by those inserts
  std::uint64_t evictions = 0;   // all kicks, including ones during rebuilds
  std::uint64_t movements = 0;   // entries relocated by rebuilds and transfers
  std::uint64_t failures = 0;    // inserts that left an entry homeless

  LevelCounters& operator+=(const LevelCounters& o) {
    inserts += o.inserts;
    placements += o.placements;
    evictions += o.evictions;
    movements += o.movements;
    failures += o.failures;
    return *this;
  }
  friend bool operator==(const LevelCounters&, const LevelCounters&) = default;
};

template <TableEntry E>
struct ChainChange {
  ChainEvent event = ChainEvent::kNone;
  std::vector<E> homeless;  // entries the chain could not hold; caller denylists them
};

/// A chain of up to three cuckoo tables that grows and shrinks with its load.
///
/// Configurations are always one of (s), (s, s/2) or (s, s/2, s/2) with
/// s = base_len * 2^j. Expansion walks these in order and merges the three
/// tables into one of length 2s when a fourth would be needed. New entries
/// go to the newest table; lookups scan every table.
///
/// Relocations are counted as movements only when an entry's bucket index
/// changes, so an entry that keeps its index in a merged table is free.
template <TableEntry E>
class TransformChain {
 public:
  struct Hit {
    E* entry = nullptr;
    std::size_t table = 0;
  };

  /// `config` must outlive the chain.
  explicit TransformChain(const ChainConfig& config) : config_(&config), scale_(config.base_len) {
    config.validate();
    tables_.reserve(kChainTables);
    tables_.emplace_back(shape_for(scale_), config_->seeds);
  }

  std::size_t table_count() const noexcept { return tables_.size(); }
  const CuckooTable<E>& table(std::size_t i) const { return tables_.at(i); }
  const CuckooTable<E>& newest() const noexcept { return tables_.back(); }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tables_) n += t.size();
    return n;
  }
  std::size_t capacity() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tables_) n += t.capacity();
    return n;
  }
  double load_rate() const noexcept {
    return static_cast<double>(size()) / static_cast<double>(capacity());
  }

  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out;
    for (const auto& t : tables_) out.push_back(t.shape().length());
    return out;
  }

  /// Expansion events needed to reach this configuration from the base.
  std::size_t step() const noexcept {
    const auto doublings = static_cast<std::size_t>(std::countr_zero(scale_ / config_->base_len));
    return 2 * doublings + (tables_.size() - 1);
  }

  ChainState state() const { return {step(), lengths(), config_->base_len}; }

  bool at_floor() const noexcept { return tables_.size() == 1 && scale_ == config_->base_len; }

  /// Oldest table first. `probes` counts buckets touched.
  Hit find(NodeId key, std::size_t* probes = nullptr) {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      if (E* e = tables_[i].find(key, probes)) return {e, i};
    }
    return {};
  }
  const E* find(NodeId key, std::size_t* probes = nullptr) const {
    for (const auto& t : tables_) {
      if (const E* e = t.find(key, probes)) return e;
    }
    return nullptr;
  }

  std::optional<std::pair<E, std::size_t>> take(NodeId key) {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      if (auto e = tables_[i].take(key)) return std::pair{std::move(*e), i};
    }
    return std::nullopt;
  }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& t : tables_) t.for_each(f);
  }
  template <class F>
  void for_each(F&& f) {
    for (auto& t : tables_) t.for_each(f);
  }

  /// True when the newest table is already at G before the next item lands.
  bool should_expand() const noexcept {
    const auto& t = tables_.back();
    return static_cast<double>(t.size()) >=
           config_->thresholds.expand_at * static_cast<double>(t.capacity());
  }

  /// True when the whole chain is below Λ and there is something to shrink.
  bool should_contract() const noexcept {
    return !at_floor() && static_cast<double>(size()) <
                              config_->thresholds.contract_at * static_cast<double>(capacity());
  }

  /// Inserts a fresh entry into the newest table.
  Placement<E> insert(E entry, VictimRng& rng, LevelCounters& counters) {
    auto p = tables_.back().insert(std::move(entry), config_->budget, rng);
    ++counters.inserts;
    counters.placements += p.placements;
    counters.evictions += p.evictions;
    if (!p.placed()) ++counters.failures;
    return p;
  }

  /// Tries every table below G, oldest first, then the remaining ones,
  /// carrying the evictee along. Returns the entry left homeless, if any.
  std::optional<E> place_anywhere(E entry, VictimRng& rng, LevelCounters& counters) {
    for (int pass = 0; pass < 2; ++pass) {
      for (auto& t : tables_) {
        const bool below = static_cast<double>(t.size()) <
                           config_->thresholds.expand_at * static_cast<double>(t.capacity());
        if (below != (pass == 0)) continue;
        auto p = t.insert(std::move(entry), config_->budget, rng);
        counters.evictions += p.evictions;
        if (p.placed()) return std::nullopt;
        entry = std::move(*p.homeless);
      }
    }
    ++counters.failures;
    return entry;
  }

  /// Moves to the next configuration of the schedule.
  ChainChange<E> advance(VictimRng& rng, LevelCounters& counters) {
    ChainChange<E> out;
    if (tables_.size() < kChainTables) {
      tables_.emplace_back(shape_for(scale_ / 2), config_->seeds);
      out.event = ChainEvent::kEnabled;
      return out;
    }
    std::vector<E> pending;
    CuckooTable<E> merged = merge(2 * scale_, pending, counters);
    std::vector<CuckooTable<E>> next;
    next.reserve(kChainTables);
    next.push_back(std::move(merged));
    next.emplace_back(shape_for(scale_), config_->seeds);
    tables_ = std::move(next);
    scale_ *= 2;
    out.event = ChainEvent::kMergedAndEnabled;
    rehome(std::move(pending), rng, counters, out.homeless);
    return out;
  }

  /// Shrinks after a deletion from table `hit`. With several tables the hit
  /// table is dropped and its entries re-placed; a lone table is halved, never
  /// below the base length. A shrink that would leave the chain at or above G
  /// is not performed: the newest table is dropped instead of the hit one if
  /// that fits, and a lone table waits until half its cells suffice.
  ChainChange<E> contract(std::size_t hit, VictimRng& rng, LevelCounters& counters) {
    ChainChange<E> out;
    const double expand_at = config_->thresholds.expand_at;
    if (tables_.size() >= 2) {
      auto fits_without = [&](std::size_t i) {
        const auto rest = static_cast<double>(capacity() - tables_[i].capacity());
        return static_cast<double>(size()) < expand_at * rest;
      };
      if (hit >= tables_.size() || !fits_without(hit)) hit = tables_.size() - 1;
      if (!fits_without(hit)) return out;
      std::vector<E> displaced;
      for (auto& le : tables_[hit].take_all()) displaced.push_back(std::move(le.entry));
      counters.movements += displaced.size();
      tables_.erase(tables_.begin() + static_cast<std::ptrdiff_t>(hit));
      normalize(displaced, counters);
      out.event = ChainEvent::kRemoved;
      rehome(std::move(displaced), rng, counters, out.homeless);
      return out;
    }
    if (scale_ / 2 < config_->base_len) return out;
    if (static_cast<double>(size()) >= expand_at * static_cast<double>(capacity()) / 2) return out;
    scale_ /= 2;
    std::vector<E> pending;
    CuckooTable<E> halved = merge(scale_, pending, counters);
    tables_.clear();
    tables_.push_back(std::move(halved));
    out.event = ChainEvent::kHalved;
    rehome(std::move(pending), rng, counters, out.homeless);
    return out;
  }

  /// Removes and returns every entry. The chain keeps its shape.
  std::vector<E> drain() {
    std::vector<E> out;
    out.reserve(size());
    for (auto& t : tables_) {
      for (auto& le : t.take_all()) out.push_back(std::move(le.entry));
    }
    return out;
  }

 private:
  TableShape shape_for(std::size_t length) const {
    return TableShape::of_length(length, config_->cells_per_bucket);
  }

  // Rebuilds all current tables into one table of `length`. Entries whose
  // bucket index survives go straight in; the rest are appended to `pending`.
  CuckooTable<E> merge(std::size_t length, std::vector<E>& pending, LevelCounters& counters) {
    CuckooTable<E> merged(shape_for(length), config_->seeds);
    for (auto& t : tables_) {
      for (auto& le : t.take_all()) {
        if (!merged.try_place_at(le.entry, le.where)) pending.push_back(std::move(le.entry));
      }
    }
    counters.movements += pending.size();
    return merged;
  }

  // After dropping one table, folds the rest back into the configuration
  // family. (s/2, s/2) becomes (s); a lone (s/2) below the base becomes
  // (base). Any entry whose bucket changes is appended to `displaced`.
  void normalize(std::vector<E>& displaced, LevelCounters& counters) {
    if (tables_.size() == 2 && tables_[0].shape().length() == scale_ / 2) {
      tables_.push_back(merge(scale_, displaced, counters));
      tables_.erase(tables_.begin(), tables_.begin() + 2);
      return;
    }
    if (tables_.size() == 1 && tables_[0].shape().length() != scale_) {
      const std::size_t length = tables_[0].shape().length();
      if (length >= config_->base_len) {
        scale_ = length;
      } else {
        scale_ = config_->base_len;
        tables_.push_back(merge(scale_, displaced, counters));
        tables_.erase(tables_.begin());
      }
    }
  }

  void rehome(std::vector<E> entries, VictimRng& rng, LevelCounters& counters,
              std::vector<E>& homeless) {
    for (auto& e : entries) {
      if (auto left = place_anywhere(std::move(e), rng, counters)) {
        homeless.push_back(std::move(*left));
      }
    }
  }

  const ChainConfig* config_;
  std::size_t scale_;  // length of the first table
  std::vector<CuckooTable<E>> tables_;
};

}  // namespace cuckoograph

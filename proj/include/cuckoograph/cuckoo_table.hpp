#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cuckoograph/types.hpp"

namespace cuckoograph {

/// An entry stored in a cuckoo table. A default-constructed entry is a vacant
/// cell and reports kVacant as its key.
template <class E>
concept TableEntry = std::default_initializable<E> && std::movable<E> && requires(const E& e) {
  { e.key() } -> std::convertible_to<NodeId>;
};

/// Bucket counts of the two arrays. The major array has twice the buckets of
/// the minor one; the "length" of a table is the major bucket count.
struct TableShape {
  std::size_t len_major = 2;
  std::size_t len_minor = 1;
  std::size_t cells_per_bucket = 8;

  static TableShape of_length(std::size_t length, std::size_t cells_per_bucket) {
    if (length < 2 || length % 2 != 0) {
      throw std::invalid_argument("table length must be even and >= 2");
    }
    if (cells_per_bucket == 0) {
      throw std::invalid_argument("cells_per_bucket must be >= 1");
    }
    return {length, length / 2, cells_per_bucket};
  }

  std::size_t length() const noexcept { return len_major; }
  std::size_t buckets() const noexcept { return len_major + len_minor; }
  std::size_t capacity() const noexcept { return buckets() * cells_per_bucket; }

  friend bool operator==(const TableShape&, const TableShape&) = default;
};

/// Upper bound on evictions performed by one logical insertion.
struct KickBudget {
  std::size_t max_loops = 250;
};

/// Stored entries over cell capacity.
inline double load_rate(const TableShape& shape, std::size_t count) noexcept {
  return static_cast<double>(count) / static_cast<double>(shape.capacity());
}

struct CellLocation {
  int array = 0;  // 0 = major (B1), 1 = minor (B2)
  std::size_t bucket = 0;

  friend bool operator==(const CellLocation&, const CellLocation&) = default;
};

/// Outcome of one logical insertion. When `homeless` is set the insertion ran
/// out of kicks and that entry (not necessarily the one passed in) is no
/// longer in the table.
template <TableEntry E>
struct Placement {
  std::size_t placements = 0;
  std::size_t evictions = 0;
  std::optional<E> homeless;

  bool placed() const noexcept { return !homeless.has_value(); }
};

template <TableEntry E>
struct LocatedEntry {
  E entry;
  CellLocation where;
};

/// Two-array bucketized cuckoo hash table keyed by NodeId.
///
/// Candidate buckets are hash_1(key) mod len_major in B1 and
/// hash_2(key) mod len_minor in B2. A full pair of candidates triggers a
/// random walk: a uniformly chosen resident of the bucket is replaced and
/// moved to its bucket in the other array, up to the kick budget.
template <TableEntry E>
class CuckooTable {
 public:
  CuckooTable(TableShape shape, HashPair seeds)
      : shape_(shape), seeds_(seeds), cells_(shape.capacity()) {
    if (shape_.len_major != 2 * shape_.len_minor || shape_.len_minor == 0 ||
        shape_.cells_per_bucket == 0) {
      throw std::invalid_argument("table shape must be 2:1 with non-empty arrays");
    }
  }

  const TableShape& shape() const noexcept { return shape_; }
  const HashPair& seeds() const noexcept { return seeds_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t capacity() const noexcept { return shape_.capacity(); }
  double load_rate() const noexcept { return cuckoograph::load_rate(shape_, size_); }

  std::size_t bucket_index(NodeId key, int array) const noexcept {
    return array == 0 ? seeded_hash(key, seeds_.seed_1) % shape_.len_major
                      : seeded_hash(key, seeds_.seed_2) % shape_.len_minor;
  }

  /// Scans at most the two candidate buckets. `probes`, when given, is
  /// incremented once per bucket touched.
  const E* find(NodeId key, std::size_t* probes = nullptr) const {
    const std::size_t slot = locate(key, probes);
    return slot == npos ? nullptr : &cells_[slot];
  }
  E* find(NodeId key, std::size_t* probes = nullptr) {
    const std::size_t slot = locate(key, probes);
    return slot == npos ? nullptr : &cells_[slot];
  }

  /// Caller guarantees `entry.key()` is not already present.
  Placement<E> insert(E entry, KickBudget budget, VictimRng& rng) {
    Placement<E> out;
    for (int array = 0; array < 2; ++array) {
      const std::size_t slot = free_slot(array, bucket_index(entry.key(), array));
      if (slot != npos) {
        occupy(slot, std::move(entry));
        out.placements = 1;
        return out;
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, shape_.cells_per_bucket - 1);
    E current = std::move(entry);
    int array = 0;
    for (;;) {
      if (out.evictions >= budget.max_loops) {
        out.homeless = std::move(current);
        return out;
      }
      const std::size_t base = bucket_begin(array, bucket_index(current.key(), array));
      std::swap(current, cells_[base + pick(rng)]);
      ++out.placements;
      ++out.evictions;
      array ^= 1;
      const std::size_t slot = free_slot(array, bucket_index(current.key(), array));
      if (slot != npos) {
        occupy(slot, std::move(current));
        ++out.placements;
        return out;
      }
    }
  }

  /// Stores `entry` in the given bucket if that bucket is one of its candidates
  /// and has a free cell. Leaves `entry` untouched on failure.
  bool try_place_at(E& entry, CellLocation where) {
    if (bucket_index(entry.key(), where.array) != where.bucket) return false;
    const std::size_t slot = free_slot(where.array, where.bucket);
    if (slot == npos) return false;
    occupy(slot, std::move(entry));
    return true;
  }

  std::optional<E> take(NodeId key) {
    const std::size_t slot = locate(key, nullptr);
    if (slot == npos) return std::nullopt;
    std::optional<E> out(std::move(cells_[slot]));
    cells_[slot] = E{};
    --size_;
    return out;
  }

  bool remove(NodeId key) { return take(key).has_value(); }

  template <class F>
  void for_each(F&& f) const {
    for (const E& cell : cells_) {
      if (cell.key() != kVacant) f(cell);
    }
  }

  template <class F>
  void for_each(F&& f) {
    for (E& cell : cells_) {
      if (cell.key() != kVacant) f(cell);
    }
  }

  template <class F>
  void for_each_located(F&& f) const {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i].key() != kVacant) f(cells_[i], location_of(i));
    }
  }

  /// Moves every entry out, leaving the table empty.
  std::vector<LocatedEntry<E>> take_all() {
    std::vector<LocatedEntry<E>> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i].key() == kVacant) continue;
      out.push_back({std::move(cells_[i]), location_of(i)});
      cells_[i] = E{};
    }
    size_ = 0;
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t bucket_begin(int array, std::size_t bucket) const noexcept {
    const std::size_t offset = array == 0 ? 0 : shape_.len_major;
    return (offset + bucket) * shape_.cells_per_bucket;
  }

  CellLocation location_of(std::size_t slot) const noexcept {
    const std::size_t bucket = slot / shape_.cells_per_bucket;
    if (bucket < shape_.len_major) return {0, bucket};
    return {1, bucket - shape_.len_major};
  }

  std::size_t free_slot(int array, std::size_t bucket) const noexcept {
    const std::size_t base = bucket_begin(array, bucket);
    for (std::size_t i = 0; i < shape_.cells_per_bucket; ++i) {
      if (cells_[base + i].key() == kVacant) return base + i;
    }
    return npos;
  }

  std::size_t locate(NodeId key, std::size_t* probes) const noexcept {
    for (int array = 0; array < 2; ++array) {
      if (probes != nullptr) ++*probes;
      const std::size_t base = bucket_begin(array, bucket_index(key, array));
      for (std::size_t i = 0; i < shape_.cells_per_bucket; ++i) {
        if (cells_[base + i].key() == key) return base + i;
      }
    }
    return npos;
  }

  void occupy(std::size_t slot, E&& entry) {
    cells_[slot] = std::move(entry);
    ++size_;
  }

  TableShape shape_;
  HashPair seeds_;
  std::vector<E> cells_;
  std::size_t size_ = 0;
};

}  // namespace cuckoograph

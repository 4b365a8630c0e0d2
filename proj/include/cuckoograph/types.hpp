#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace cuckoograph {

using NodeId = std::uint64_t;
using Weight = std::uint64_t;

// Marks an empty cell. Not accepted as a node id by the public API.
inline constexpr NodeId kVacant = std::numeric_limits<NodeId>::max();

// Randomness for victim selection during cuckoo eviction.
using VictimRng = std::mt19937_64;

// Two seeds select two independent members of the hash family.
struct HashPair {
  std::uint64_t seed_1 = 0x9e3779b97f4a7c15ULL;
  std::uint64_t seed_2 = 0xc2b2ae3d27d4eb4fULL;
  friend bool operator==(const HashPair&, const HashPair&) = default;
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seeded 64-bit hash with full avalanche. Distinct seeds give independent
/// bucket choices; bucket index is always taken modulo the array length.
inline constexpr std::uint64_t seeded_hash(NodeId key, std::uint64_t seed) noexcept {
  return detail::splitmix64(key ^ detail::splitmix64(seed));
}

}  // namespace cuckoograph

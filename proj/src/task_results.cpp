#include "cuckoograph/task_results.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cuckoograph {

namespace {

constexpr std::string_view kTaskNames[] = {"bfs", "sssp", "tc", "cc", "pr", "bc", "lcc"};

}  // namespace

std::string_view task_name(Task task) noexcept { return kTaskNames[static_cast<int>(task)]; }

Task parse_task(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (int i = 0; i < 7; ++i) {
    if (kTaskNames[i] == lower) return static_cast<Task>(i);
  }
  throw std::invalid_argument("unknown task: " + std::string(name));
}

void TaskSpec::validate() const {
  if (top_k == 0) throw std::invalid_argument("top_k must be >= 1");
  if (pr_iterations == 0) throw std::invalid_argument("pr_iterations must be >= 1");
  if (!(pr_damping > 0.0 && pr_damping < 1.0)) {
    throw std::invalid_argument("pr_damping must lie in (0, 1)");
  }
  if (sssp_sources == 0) throw std::invalid_argument("sssp_sources must be >= 1");
}

void TaskDigest::add(std::uint64_t x) noexcept {
  // FNV-1a over the little-endian bytes.
  for (int i = 0; i < 8; ++i) {
    value ^= (x >> (8 * i)) & 0xffU;
    value *= 0x100000001b3ULL;
  }
}

void TaskDigest::add_score(double x) noexcept {
  add(static_cast<std::uint64_t>(std::llround(x * 1e9)));
}

void TaskDigest::add(const BfsResult& r) {
  add(r.order.size());
  for (NodeId id : r.order) add(id);
  items += r.order.size();
}

void TaskDigest::add(const Distances& d) {
  add(d.size());
  for (const auto& [id, dist] : d) {
    add(id);
    add(dist);
  }
  items += d.size();
}

void TaskDigest::add(const Components& c) {
  add(c.size());
  for (const auto& comp : c) {
    add(comp.size());
    for (NodeId id : comp) add(id);
  }
  items += c.size();
}

void TaskDigest::add(const Scores& s) {
  add(s.size());
  for (const auto& [id, score] : s) {
    add(id);
    add_score(score);
  }
  items += s.size();
}

}  // namespace cuckoograph

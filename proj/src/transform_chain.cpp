#include "cuckoograph/transform_chain.hpp"

namespace cuckoograph {

void ChainThresholds::validate() const {
  if (!(expand_at > 0.0 && expand_at < 1.0)) {
    throw std::invalid_argument("expansion threshold must lie in (0, 1)");
  }
  if (!(contract_at > 0.0 && contract_at <= (2.0 / 3.0) * expand_at)) {
    throw std::invalid_argument("contraction threshold must lie in (0, 2G/3]");
  }
}

void ChainConfig::validate() const {
  thresholds.validate();
  if (base_len < 4 || base_len % 4 != 0) {
    throw std::invalid_argument("chain base length must be a positive multiple of 4");
  }
  if (cells_per_bucket == 0) throw std::invalid_argument("cells_per_bucket must be >= 1");
  if (budget.max_loops == 0) throw std::invalid_argument("kick budget must be >= 1");
  if (seeds.seed_1 == seeds.seed_2) throw std::invalid_argument("hash seeds must differ");
}

std::vector<std::size_t> lengths_after(std::size_t step, std::size_t base_len,
                                       std::size_t max_tables) {
  if (max_tables != kChainTables) {
    throw std::invalid_argument("only the three-table schedule is defined");
  }
  if (base_len == 0) throw std::invalid_argument("base length must be >= 1");
  if (step == 0) return {base_len};
  const std::size_t doublings = (step - 1) / 2;
  const std::size_t first = base_len << doublings;
  if ((step - 1) % 2 == 0) return {first, first / 2};
  return {first, first / 2, first / 2};
}

}  // namespace cuckoograph

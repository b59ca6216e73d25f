#pragma once

#include <cstdint>
#include <vector>

#include "cforge/model.hpp"

namespace corpus {

/// count settings from gen_random with seeds base, base+1, ...
std::vector<cforge::ProductSetting> products(std::size_t count, std::size_t n, std::size_t m,
                                             std::uint64_t base);

struct ContractCase {
  cforge::Setting setting;
  cforge::Contract contract;
  double delta = 0.0;
};

/// Normalized settings paired with contracts that additively delta-incentivize
/// some action with non-negative principal payoff. Mix of cheapest sparse
/// contracts for random actions and random linear contracts.
std::vector<ContractCase> delta_ic_cases(std::size_t count, std::uint64_t seed);

}  // namespace corpus

#pragma once

#include <cstddef>

#include "cforge/model.hpp"

namespace cforge {

struct ToICResult {
  Contract contract;          // mixed contract; the input itself when delta = 0
  std::size_t source_action = 0;
  double source_payoff = 0.0;  // payoff of the delta-incentivized action under the input
  double bound = 0.0;          // (1 - sqrt delta) Pi - (sqrt delta - delta)
  AgentChoice realized;        // exact best response under the output contract
  bool bound_holds = false;
};

/// Interpolates with the full-transfer linear contract:
/// p' = (1 - sqrt delta) p + sqrt delta * r_S.
/// Requires a normalized setting, delta in [0,1) and p_i <= 1 at the
/// delta-incentivized action (additive notion).
ToICResult delta_to_ic(const Setting& setting, const Contract& contract, double delta);

struct ToIRResult {
  Contract contract;
  std::size_t source_action = 0;
  double source_payoff = 0.0;
  bool lifted = false;     // false means the zero contract was returned
  AgentChoice realized;    // delta-IC and IR choice under the output
};

/// Adds delta to every payment when the delta-incentivized payoff exceeds
/// delta, otherwise returns the zero contract.
ToIRResult delta_to_ir(const Setting& setting, const Contract& contract, double delta);

}  // namespace cforge

#include "cforge/transform.hpp"

#include <cmath>

namespace cforge {

namespace {

MixedContract to_mixed(const Contract& contract) {
  return std::visit(
      [](const auto& c) -> MixedContract {
        using T = std::decay_t<decltype(c)>;
        MixedContract out;
        if constexpr (std::is_same_v<T, SparseContract>) {
          out.sparse = c;
        } else if constexpr (std::is_same_v<T, LinearContract>) {
          out.alpha = c.alpha;
        } else if constexpr (std::is_same_v<T, SeparableContract>) {
          out.item_payments = c.item_payments;
        } else {
          out = c;
        }
        return out;
      },
      contract);
}

}  // namespace

ToICResult delta_to_ic(const Setting& setting, const Contract& contract, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in [0,1)");
  if (!is_normalized(setting)) throw ArgumentError("delta_to_ic needs a normalized setting (R_i <= 1)");

  ToICResult res;
  const AgentChoice src = delta_best_response(setting, contract, delta, ICNotion::Additive);
  res.source_action = src.action;
  res.source_payoff = src.principal_payoff;
  const double paid = expected_payment(setting, src.action, contract);
  if (paid > 1.0 + 1e-9) throw ArgumentError("expected payment at the incentivized action exceeds 1");

  const double root = std::sqrt(delta);
  if (delta == 0.0) {
    res.contract = contract;
  } else {
    MixedContract mixed = to_mixed(contract);
    const double keep = 1.0 - root;
    mixed.sparse.base *= keep;
    for (auto& [s, p] : mixed.sparse.payments) p *= keep;
    for (double& p : mixed.item_payments) p *= keep;
    mixed.alpha = keep * mixed.alpha + root;
    res.contract = std::move(mixed);
  }
  res.bound = (1.0 - root) * res.source_payoff - (root - delta);
  res.realized = best_response(setting, res.contract);
  res.bound_holds = res.realized.principal_payoff >= res.bound - 1e-9 * magnitude(setting);
  return res;
}

ToIRResult delta_to_ir(const Setting& setting, const Contract& contract, double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0)) throw ArgumentError("delta must be finite and >= 0");
  if (!is_normalized(setting)) warn("delta_to_ir on an unnormalized setting");

  ToIRResult res;
  const AgentChoice src = delta_best_response(setting, contract, delta, ICNotion::Additive);
  res.source_action = src.action;
  res.source_payoff = src.principal_payoff;
  if (src.principal_payoff > delta) {
    MixedContract lifted = to_mixed(contract);
    if (std::holds_alternative<SparseContract>(contract)) {
      SparseContract s = std::get<SparseContract>(contract);
      s.base += delta;
      res.contract = std::move(s);
    } else {
      lifted.sparse.base += delta;
      res.contract = std::move(lifted);
    }
    res.lifted = true;
  } else {
    res.contract = SparseContract{};
  }
  res.realized = delta_best_response(setting, res.contract, delta, ICNotion::Additive, true);
  return res;
}

}  // namespace cforge

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cforge/exact.hpp"
#include "cforge/lp.hpp"
#include "cforge/model.hpp"

namespace cforge {

enum class DeltaMethod { Cuts, Ellipsoid };

DeltaMethod parse_method(const std::string& text);

/// One step of the search, in normalized units (rewards divided by scale).
struct TraceRow {
  std::size_t action = 0;
  std::size_t step = 0;
  double gamma = 0.0;       // threshold being decided
  double value = 0.0;       // restricted primal value
  double lambda_sum = 0.0;  // sum of duals
  std::optional<Outcome> cut;
  double cut_ratio = 0.0;
  std::string event;        // "cut", "feasible", "infeasible", "ellipsoid-cut"
  std::vector<double> lambda;
};

struct DeltaOptions {
  /// Binary-search width in original units; <= 0 means 1e-6 * R_i.
  double eps_search = 0.0;
  DeltaMethod method = DeltaMethod::Cuts;
  std::size_t max_cuts = 5000;
  std::size_t max_doublings = 200;
  std::size_t ellipsoid_iterations = 0;  // 0 means 50 (n-1)^2 + 200
  lp::Tolerances lp_tol = {};
  std::function<void(const TraceRow&)> trace;
};

struct DeltaSolveResult {
  std::size_t action = 0;
  SparseContract contract;
  double expected_payment = 0.0;  // original units
  double gamma_star = 0.0;        // original units
  double eps_search = 0.0;        // original units
  double scale = 1.0;             // normalization divisor
  std::vector<Outcome> cut_outcomes;
  /// Multipliers accepted as feasible for the relaxed dual by the oracle (normalized units).
  std::vector<std::vector<double>> accepted_duals;
  std::size_t decisions = 0;
  std::size_t lp_solves = 0;
  double base_lift = 0.0;  // base raised after extraction to absorb round-off
};

/// Contract multiplicatively delta-incentivizing `action` with expected
/// payment <= OPT_i + eps_search (OPT_i: the IC minimum payment).
///
/// Works on the relaxed primal restricted to a pool of outcomes plus a
/// uniform base payment. Cuts come from the separation FPTAS run with
/// parameter delta; a binary search over the dual objective threshold fixes
/// the final pool, from which the contract is read off.
DeltaSolveResult min_payment_delta(const ProductSetting& setting, std::size_t action, double delta,
                                   const DeltaOptions& options = {});

/// Runs min_payment_delta per action and keeps the best payoff.
OptContractResult opt_contract_delta(const ProductSetting& setting, double delta,
                                     const DeltaOptions& options = {},
                                     std::vector<DeltaSolveResult>* per_action = nullptr);

/// Largest n accepted by the delta solver.
inline constexpr std::size_t kMaxDeltaActions = 6;

}  // namespace cforge

#pragma once

#include <cstddef>
#include <vector>

#include "cforge/model.hpp"

namespace cforge {

struct EnvelopeSegment {
  std::size_t action = 0;
  double left = 0.0;   // smallest alpha incentivizing `action`
  double right = 1.0;  // open, except the last segment which ends at 1
};

/// Upper envelope of u_i(alpha) = alpha R_i - c_i over [0,1].
struct Envelope {
  std::vector<EnvelopeSegment> segments;  // left to right; R, c and welfare non-decreasing
  std::vector<std::size_t> shadowed;      // actions dropped for sharing R with a cheaper one

  std::vector<double> breakpoints() const;
  /// Segment index containing alpha (ties at a breakpoint go right).
  std::size_t locate(double alpha) const;
};

/// Ties at a breakpoint resolve to the higher-R action. Actions whose R equals
/// another action's are warned about and only the cheapest (then lowest
/// index) is kept.
Envelope upper_envelope(const Setting& setting);

/// alpha at which actions a and b give the agent equal utility.
double indifference_alpha(const Setting& setting, std::size_t a, std::size_t b);

struct LinearChoice {
  double alpha = 0.0;
  std::size_t action = 0;
  double payoff = 0.0;
};

/// Best linear contract for which `action` is additively delta-IC.
/// delta = 0 scans envelope left endpoints; delta > 0 solves a
/// one-variable program per action.
LinearChoice optimal_linear(const Setting& setting, double delta = 0.0);

struct SeparableChoice {
  std::vector<double> item_payments;
  std::size_t action = 0;
  double payoff = 0.0;
};

/// Best separable contract (additive delta-IC), one LP per action.
SeparableChoice optimal_separable(const ProductSetting& setting, double delta = 0.0);

struct LinearCandidate {
  double alpha = 0.0;
  std::size_t action = 0;
  double payoff = 0.0;   // (1 - alpha) R_action
  std::size_t interval = 0;  // 1-based interval of the action's envelope alpha
  bool delta_ic = false;     // additive delta-IC check at alpha
};

struct LinearApproxResult {
  double alpha = 0.0;
  std::size_t action = 0;
  double payoff = 0.0;
  int kappa = 0;
  std::vector<LinearCandidate> candidates;
  std::vector<double> interval_left;  // left endpoints, interval k at [k-1]
  double guarantee = 0.0;             // (1-gamma)/(kappa+1) * first_best
  double welfare = 0.0;               // first best R_N - c_N
  double telescoped = 0.0;            // sum_k (1 - alpha_{h(k-1),h(k)}) R_{h(k)}
};

/// Geometric-interval linear contract: payoff >= (1-gamma)/(kappa+1) * first best
/// with kappa = ceil(log_{1+delta}(1/gamma)). Empty intervals are skipped and
/// the chain continues across them.
LinearApproxResult approx_linear_delta(const Setting& setting, double delta, double gamma);

/// Pairs (i, k) with R_i > R_k and R_i - c_i >= R_k - c_k violating
/// (R_i - c_i) - (R_k - c_k) <= (1 - alpha_{k,i}) R_i beyond tol.
std::vector<std::pair<std::size_t, std::size_t>> welfare_gap_violations(const Setting& setting,
                                                                         double tol = 1e-9);

}  // namespace cforge

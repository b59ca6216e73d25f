#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "cforge/model.hpp"

namespace cforge {

/// Uniform double in [0,1) from the top 53 bits of one mt19937_64 draw.
double uniform01(std::mt19937_64& rng);

/// Sampling access to a hidden setting. Costs and outcome rewards are public;
/// distributions are only reachable through `sample`.
///
/// Product settings draw each item independently (item order 0..m-1);
/// explicit settings invert the CDF with one uniform draw.
class QueryOracle {
 public:
  QueryOracle(Setting hidden, std::uint64_t seed);

  Outcome sample(std::size_t action);
  std::size_t num_actions() const { return cforge::num_actions(hidden_); }
  const std::vector<double>& costs() const { return cforge::costs(hidden_); }
  double reward(Outcome s) const;
  std::size_t queries() const { return queries_; }
  std::uint64_t seed() const { return seed_; }

  /// For experiments that compare against the truth.
  const Setting& hidden() const { return hidden_; }

 private:
  Setting hidden_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::size_t queries_ = 0;
};

struct EmpiricalModel {
  std::size_t samples = 0;
  std::vector<Outcome> outcomes;                  // observed outcomes, sorted
  std::vector<std::vector<std::size_t>> counts;   // [action][outcome position]
  ExplicitSetting setting;                        // outcome k of `setting` is outcomes[k]

  std::optional<std::size_t> position(Outcome s) const;
  double tilde_q(std::size_t action, Outcome s) const;
};

/// ceil(3 ln(2n/(eta gamma)) / (eta eps^2)).
std::size_t required_samples(std::size_t n, double eta, double eps, double gamma);

/// s queries per action, actions in index order.
EmpiricalModel estimate(QueryOracle& oracle, std::size_t s);

/// Smallest nonzero outcome probability over all actions (enumerates 2^m
/// outcomes for product settings).
double min_positive_probability(const Setting& setting);

/// (1-eps) q <= q~ <= (1+eps) q for every nonzero q, and q~ = 0 where q = 0.
bool within_relative_error(const Setting& truth, const EmpiricalModel& model, double eps);

/// Re-keys a contract on the empirical outcome positions to true outcome ids.
SparseContract to_true_outcomes(const EmpiricalModel& model, const SparseContract& contract);
/// Restricts a contract on true outcome ids to the observed outcomes.
SparseContract to_empirical_outcomes(const EmpiricalModel& model, const SparseContract& contract);

struct BlackBoxResult {
  SparseContract contract;  // keyed by true outcome ids
  std::size_t action = 0;   // action the contract targets on the empirical model
  std::size_t samples = 0;
  double eta = 0.0;
  double claimed_delta = 0.0;    // 4 eps
  double ic_slack = 0.0;         // additive slack on the truth at delta = 0
  double payoff_on_true = 0.0;   // R_i - P_i on the truth
  double payoff_empirical = 0.0;
  double opt = 0.0;              // exact IC optimum on the truth
  double payoff_bound = 0.0;     // opt - 5 eps
  bool event_holds = false;      // the (1 +- eps) estimation event

  // Intermediate inequalities of the analysis, measured in this run.
  double true_opt_slack_on_empirical = 0.0;  // >= -2 eps expected
  double payoff_gap = 0.0;                   // Pi - Pi~, >= -2 eps expected
  double payment_gap = 0.0;                  // P~ - P for the true optimum, >= -3 eps expected
};

/// Learns the distributions by sampling and returns the optimal additively
/// 2eps-IC contract of the empirical model. eta defaults to the hidden
/// setting's minimum nonzero probability.
BlackBoxResult blackbox_contract(QueryOracle& oracle, double eps, double gamma,
                                 std::optional<double> eta = std::nullopt);

struct NegativePair {
  ProductSetting first;
  ProductSetting second;
  double eta = 0.0;
  double tau = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  double reward_low = 0.0;   // R_1 = 2 beta / tau
  double reward_high = 0.0;  // R_2 = 1
  double benchmark = 0.0;    // beta

  /// -ln(gamma) / (9 sqrt eta).
  double query_lower_bound(double gamma) const;
  /// R_2 - (tau^2 (1 - 2mu) + 1)/(tau - 1)^2 (c_2 - delta): best payoff of
  /// symmetric payments delta-incentivizing action 2 in both settings.
  double symmetric_payoff_bound(double delta) const;
  /// Probability that the tau^2 mu item appears in `queries` samples of action 2.
  double observation_probability(std::size_t queries) const;
};

/// tau = 1 + sqrt 2, mu = sqrt(eta)/tau, beta = 1/(1 + 1/tau^2). eta <= 1/625.
NegativePair negative_pair(double eta);

struct ObservationExperiment {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double frequency = 0.0;
  double predicted = 0.0;
  double standard_error = 0.0;
};

/// Draws `queries` samples of action 2 in the first setting per trial and
/// counts trials in which item 0 (probability tau^2 mu) shows up.
ObservationExperiment observe_negative_pair(const NegativePair& pair, std::size_t queries,
                                            std::size_t trials, std::uint64_t seed);

/// Mixes a base seed with a trial index (splitmix64 finalizer).
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

}  // namespace cforge

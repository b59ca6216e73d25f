#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cforge {

// Error categories. The CLI maps these onto exit codes.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Absolute tie tolerance used by best responses.
inline constexpr double kTieTolerance = 1e-9;
/// Default slack tolerance for incentive checks (scaled by max(1, |setting|)).
inline constexpr double kICTolerance = 1e-9;
/// Largest item count that may be enumerated into 2^m outcomes.
inline constexpr std::size_t kMaxEnumerableItems = 20;

/// A set of items, stored as a bit-set. Item j is bit j.
///
/// For explicit settings the same value doubles as the outcome index, so a
/// product setting and its enumerated image share outcome identities.
class Outcome {
 public:
  constexpr Outcome() = default;
  constexpr explicit Outcome(std::uint64_t bits) : bits_(bits) {}
  static Outcome from_items(std::span<const std::size_t> items);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(std::size_t item) const { return (bits_ >> item) & 1u; }
  constexpr Outcome with(std::size_t item) const { return Outcome(bits_ | (std::uint64_t{1} << item)); }
  int size() const;
  std::vector<std::size_t> items() const;
  /// True when every item lies in {0..m-1}.
  bool fits(std::size_t num_items) const;

  friend constexpr auto operator<=>(Outcome, Outcome) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Succinct setting: n actions, each a product distribution over m items.
class ProductSetting {
 public:
  ProductSetting() = default;
  ProductSetting(std::vector<double> costs, std::vector<double> rewards,
                 std::vector<std::vector<double>> probs);

  std::size_t num_actions() const { return costs_.size(); }
  std::size_t num_items() const { return rewards_.size(); }
  double cost(std::size_t i) const { return costs_.at(i); }
  double reward(std::size_t j) const { return rewards_.at(j); }
  double prob(std::size_t i, std::size_t j) const { return probs_.at(i).at(j); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& rewards() const { return rewards_; }
  const std::vector<std::vector<double>>& probs() const { return probs_; }
  std::span<const double> row(std::size_t i) const { return probs_.at(i); }

  /// R_i = sum_j q_{i,j} r_j (cached at construction).
  double expected_reward(std::size_t i) const { return expected_rewards_.at(i); }
  const std::vector<double>& expected_rewards() const { return expected_rewards_; }
  /// r_S = sum of item rewards in S.
  double outcome_reward(Outcome s) const;

  friend bool operator==(const ProductSetting&, const ProductSetting&) = default;

 private:
  std::vector<double> costs_;
  std::vector<double> rewards_;
  std::vector<std::vector<double>> probs_;
  std::vector<double> expected_rewards_;
};

/// Dense setting: n actions, each an explicit distribution over K outcomes.
class ExplicitSetting {
 public:
  ExplicitSetting() = default;
  /// `check_welfare = false` admits R_i < c_i (empirical estimates).
  ExplicitSetting(std::vector<double> costs, std::vector<double> outcome_rewards,
                  std::vector<std::vector<double>> dist, bool check_welfare = true);

  std::size_t num_actions() const { return costs_.size(); }
  std::size_t num_outcomes() const { return outcome_rewards_.size(); }
  double cost(std::size_t i) const { return costs_.at(i); }
  double outcome_reward(std::size_t k) const { return outcome_rewards_.at(k); }
  double prob(std::size_t i, std::size_t k) const { return dist_.at(i).at(k); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& outcome_rewards() const { return outcome_rewards_; }
  const std::vector<std::vector<double>>& dist() const { return dist_; }
  std::span<const double> row(std::size_t i) const { return dist_.at(i); }

  double expected_reward(std::size_t i) const { return expected_rewards_.at(i); }
  const std::vector<double>& expected_rewards() const { return expected_rewards_; }

  friend bool operator==(const ExplicitSetting&, const ExplicitSetting&) = default;

 private:
  std::vector<double> costs_;
  std::vector<double> outcome_rewards_;
  std::vector<std::vector<double>> dist_;
  std::vector<double> expected_rewards_;
};

using Setting = std::variant<ProductSetting, ExplicitSetting>;

// Contracts. All payments are non-negative (limited liability).

/// Pays `base` on every outcome plus `payments[S]` on outcome S.
struct SparseContract {
  double base = 0.0;
  std::map<Outcome, double> payments;  // no zero entries; ordered by bit-set
  friend bool operator==(const SparseContract&, const SparseContract&) = default;
};

/// Pays alpha * r_S.
struct LinearContract {
  double alpha = 0.0;
  friend bool operator==(const LinearContract&, const LinearContract&) = default;
};

/// Pays sum_{j in S} item_payments[j].
struct SeparableContract {
  std::vector<double> item_payments;
  friend bool operator==(const SeparableContract&, const SeparableContract&) = default;
};

/// Sparse + separable + linear components, added outcome by outcome.
/// Produced by interpolating a contract with the full-transfer linear contract.
struct MixedContract {
  SparseContract sparse;
  std::vector<double> item_payments;  // empty means no separable part
  double alpha = 0.0;
  friend bool operator==(const MixedContract&, const MixedContract&) = default;
};

using Contract = std::variant<SparseContract, LinearContract, SeparableContract, MixedContract>;

std::string_view contract_kind(const Contract& contract);

/// Drops zero entries and rejects negative or non-finite payments.
SparseContract make_sparse(double base, std::map<Outcome, double> payments);

struct AgentChoice {
  std::size_t action = 0;
  double agent_utility = 0.0;
  double principal_payoff = 0.0;
};

enum class ICNotion { Additive, Multiplicative };

std::string_view to_string(ICNotion notion);
ICNotion parse_notion(std::string_view text);

// Setting queries.

double outcome_probability(const ProductSetting& setting, std::size_t action, Outcome outcome);
double outcome_probability(const ExplicitSetting& setting, std::size_t action, Outcome outcome);

double expected_reward(const ProductSetting& setting, std::size_t action);
double expected_reward(const ExplicitSetting& setting, std::size_t action);
double expected_reward(const Setting& setting, std::size_t action);

double expected_payment(const ProductSetting& setting, std::size_t action, const Contract& contract);
double expected_payment(const ExplicitSetting& setting, std::size_t action, const Contract& contract);
double expected_payment(const Setting& setting, std::size_t action, const Contract& contract);

/// Throws ArgumentError when the contract does not fit the setting.
void check_contract(const ProductSetting& setting, const Contract& contract);
void check_contract(const ExplicitSetting& setting, const Contract& contract);

std::size_t num_actions(const Setting& setting);
const std::vector<double>& costs(const Setting& setting);
const std::vector<double>& expected_rewards(const Setting& setting);

/// max(1, max_i R_i, max_i c_i); used to scale absolute tolerances.
double magnitude(const Setting& setting);
double magnitude(const ProductSetting& setting);
double magnitude(const ExplicitSetting& setting);

/// True when every R_i <= 1 (within tol).
bool is_normalized(const Setting& setting, double tol = 1e-9);

/// Agent's expected utility p_i - c_i and principal payoff R_i - p_i per action.
struct ActionValues {
  std::vector<double> payments;
  std::vector<double> utilities;
  std::vector<double> payoffs;
};
ActionValues evaluate(const Setting& setting, const Contract& contract);

/// Agent best response; ties (within tol_tie) go to the principal, then to the
/// lowest index.
AgentChoice best_response(const Setting& setting, const Contract& contract,
                          double tol_tie = kTieTolerance);

/// Worst slack of the delta-IC constraints for `action` (>= 0 means delta-IC).
/// Additive:       min_{i'} (p_i - c_i + delta) - (p_{i'} - c_{i'})
/// Multiplicative: min_{i'} ((1+delta) p_i - c_i) - (p_{i'} - c_{i'})
double ic_slack(const Setting& setting, const Contract& contract, std::size_t action, double delta,
                ICNotion notion);

bool verify_delta_ic(const Setting& setting, const Contract& contract, std::size_t action,
                     double delta, ICNotion notion, double tol = kICTolerance);

/// Among actions that are delta-IC (and IR, if requested) the one the
/// principal prefers; ties to the lowest index. Throws InstanceError when no
/// action qualifies.
AgentChoice delta_best_response(const Setting& setting, const Contract& contract, double delta,
                                ICNotion notion, bool require_ir = false,
                                double tol = kICTolerance);

/// Enumerates all 2^m outcomes in bit-set order.
ExplicitSetting product_to_explicit(const ProductSetting& setting,
                                    std::size_t max_items = kMaxEnumerableItems);

/// Receives non-fatal diagnostics (e.g. additive checks on unnormalized
/// settings). Defaults to stderr; pass an empty function to silence.
using WarningSink = std::function<void(std::string_view)>;
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace cforge

#include "cforge/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

namespace cforge {

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

std::string idx_msg(const char* what, std::size_t i, std::size_t n) {
  std::ostringstream os;
  os << what << " index " << i << " out of range [0," << n << ")";
  return os.str();
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

Outcome Outcome::from_items(std::span<const std::size_t> items) {
  std::uint64_t bits = 0;
  for (std::size_t j : items) {
    if (j >= 64) throw ArgumentError("item index " + std::to_string(j) + " exceeds 63");
    bits |= std::uint64_t{1} << j;
  }
  return Outcome(bits);
}

int Outcome::size() const { return std::popcount(bits_); }

std::vector<std::size_t> Outcome::items() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

bool Outcome::fits(std::size_t num_items) const {
  if (num_items >= 64) return true;
  return (bits_ >> num_items) == 0;
}

ProductSetting::ProductSetting(std::vector<double> costs, std::vector<double> rewards,
                               std::vector<std::vector<double>> probs)
    : costs_(std::move(costs)), rewards_(std::move(rewards)), probs_(std::move(probs)) {
  require(!costs_.empty(), "setting needs at least one action");
  require(probs_.size() == costs_.size(), "probs must have one row per action");
  require(rewards_.size() <= 63, "at most 63 items are supported");
  for (double c : costs_) require(finite(c) && c >= 0.0, "costs must be finite and >= 0");
  for (double r : rewards_) require(finite(r) && r >= 0.0, "rewards must be finite and >= 0");
  for (const auto& row : probs_) {
    require(row.size() == rewards_.size(), "each probs row must have m entries");
    for (double q : row) require(finite(q) && q >= 0.0 && q <= 1.0, "probabilities must lie in [0,1]");
  }
  expected_rewards_.resize(costs_.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    expected_rewards_[i] = dot(probs_[i], rewards_);
    scale = std::max({scale, expected_rewards_[i], costs_[i]});
  }
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (expected_rewards_[i] - costs_[i] < -1e-9 * scale) {
      throw ArgumentError("action " + std::to_string(i) + " has negative welfare R_i - c_i");
    }
  }
}

double ProductSetting::outcome_reward(Outcome s) const {
  double r = 0.0;
  for (std::size_t j : s.items()) {
    if (j >= rewards_.size()) throw ArgumentError(idx_msg("item", j, rewards_.size()));
    r += rewards_[j];
  }
  return r;
}

ExplicitSetting::ExplicitSetting(std::vector<double> costs, std::vector<double> outcome_rewards,
                                 std::vector<std::vector<double>> dist, bool check_welfare)
    : costs_(std::move(costs)), outcome_rewards_(std::move(outcome_rewards)), dist_(std::move(dist)) {
  require(!costs_.empty(), "setting needs at least one action");
  require(!outcome_rewards_.empty(), "setting needs at least one outcome");
  require(dist_.size() == costs_.size(), "dist must have one row per action");
  for (double c : costs_) require(finite(c) && c >= 0.0, "costs must be finite and >= 0");
  for (double r : outcome_rewards_) require(finite(r) && r >= 0.0, "outcome rewards must be finite and >= 0");
  for (const auto& row : dist_) {
    require(row.size() == outcome_rewards_.size(), "each dist row must have K entries");
    double sum = 0.0;
    for (double q : row) {
      require(finite(q) && q >= 0.0 && q <= 1.0, "probabilities must lie in [0,1]");
      sum += q;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "dist rows must sum to 1");
  }
  expected_rewards_.resize(costs_.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    expected_rewards_[i] = dot(dist_[i], outcome_rewards_);
    scale = std::max({scale, expected_rewards_[i], costs_[i]});
  }
  if (!check_welfare) return;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (expected_rewards_[i] - costs_[i] < -1e-9 * scale) {
      throw ArgumentError("action " + std::to_string(i) + " has negative welfare R_i - c_i");
    }
  }
}

std::string_view contract_kind(const Contract& contract) {
  static constexpr std::string_view names[] = {"sparse", "linear", "separable", "mixed"};
  return names[contract.index()];
}

SparseContract make_sparse(double base, std::map<Outcome, double> payments) {
  require(finite(base) && base >= 0.0, "base payment must be finite and >= 0");
  SparseContract c;
  c.base = base;
  for (auto& [s, p] : payments) {
    require(finite(p) && p >= 0.0, "payments must be finite and >= 0");
    if (p > 0.0) c.payments.emplace(s, p);
  }
  return c;
}

std::string_view to_string(ICNotion notion) {
  return notion == ICNotion::Additive ? "add" : "mult";
}

ICNotion parse_notion(std::string_view text) {
  if (text == "add" || text == "additive") return ICNotion::Additive;
  if (text == "mult" || text == "multiplicative") return ICNotion::Multiplicative;
  throw ArgumentError("unknown IC notion '" + std::string(text) + "' (expected add|mult)");
}

double outcome_probability(const ProductSetting& setting, std::size_t action, Outcome outcome) {
  if (action >= setting.num_actions()) throw ArgumentError(idx_msg("action", action, setting.num_actions()));
  const std::size_t m = setting.num_items();
  if (!outcome.fits(m)) throw ArgumentError("outcome contains items outside the item universe");
  const auto& q = setting.probs()[action];
  double p = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    p *= outcome.contains(j) ? q[j] : 1.0 - q[j];
    if (p == 0.0) return 0.0;
  }
  return p;
}

double outcome_probability(const ExplicitSetting& setting, std::size_t action, Outcome outcome) {
  if (action >= setting.num_actions()) throw ArgumentError(idx_msg("action", action, setting.num_actions()));
  if (outcome.bits() >= setting.num_outcomes()) {
    throw ArgumentError(idx_msg("outcome", static_cast<std::size_t>(outcome.bits()), setting.num_outcomes()));
  }
  return setting.dist()[action][outcome.bits()];
}

double expected_reward(const ProductSetting& setting, std::size_t action) {
  if (action >= setting.num_actions()) throw ArgumentError(idx_msg("action", action, setting.num_actions()));
  return setting.expected_reward(action);
}

double expected_reward(const ExplicitSetting& setting, std::size_t action) {
  if (action >= setting.num_actions()) throw ArgumentError(idx_msg("action", action, setting.num_actions()));
  return setting.expected_reward(action);
}

double expected_reward(const Setting& setting, std::size_t action) {
  return std::visit([&](const auto& s) { return expected_reward(s, action); }, setting);
}

void check_contract(const ProductSetting& setting, const Contract& contract) {
  const std::size_t m = setting.num_items();
  auto check_sparse = [&](const SparseContract& c) {
    require(finite(c.base) && c.base >= 0.0, "base payment must be finite and >= 0");
    for (const auto& [s, p] : c.payments) {
      require(s.fits(m), "contract pays on an outcome outside the item universe");
      require(finite(p) && p >= 0.0, "payments must be finite and >= 0");
    }
  };
  auto check_items = [&](const std::vector<double>& items, bool allow_empty) {
    if (allow_empty && items.empty()) return;
    require(items.size() == m, "item_payments must have m entries");
    for (double p : items) require(finite(p) && p >= 0.0, "item payments must be finite and >= 0");
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SparseContract>) {
          check_sparse(c);
        } else if constexpr (std::is_same_v<T, LinearContract>) {
          require(finite(c.alpha) && c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, SeparableContract>) {
          check_items(c.item_payments, false);
        } else {
          check_sparse(c.sparse);
          check_items(c.item_payments, true);
          require(finite(c.alpha) && c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0,1]");
        }
      },
      contract);
}

void check_contract(const ExplicitSetting& setting, const Contract& contract) {
  const std::size_t k = setting.num_outcomes();
  auto check_sparse = [&](const SparseContract& c) {
    require(finite(c.base) && c.base >= 0.0, "base payment must be finite and >= 0");
    for (const auto& [s, p] : c.payments) {
      require(s.bits() < k, "contract pays on an outcome index outside [0,K)");
      require(finite(p) && p >= 0.0, "payments must be finite and >= 0");
    }
  };
  auto check_items = [&](const std::vector<double>& items, bool allow_empty) {
    if (allow_empty && items.empty()) return;
    require(items.size() <= 63, "too many item payments");
    for (double p : items) require(finite(p) && p >= 0.0, "item payments must be finite and >= 0");
    // every outcome index must decompose into known items
    require(items.size() >= 63 || (k - 1) >> items.size() == 0,
            "item_payments do not cover the outcome bit-sets");
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SparseContract>) {
          check_sparse(c);
        } else if constexpr (std::is_same_v<T, LinearContract>) {
          require(finite(c.alpha) && c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, SeparableContract>) {
          check_items(c.item_payments, false);
        } else {
          check_sparse(c.sparse);
          check_items(c.item_payments, true);
          require(finite(c.alpha) && c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must lie in [0,1]");
        }
      },
      contract);
}

namespace {

double sparse_payment(const ProductSetting& s, std::size_t i, const SparseContract& c) {
  double p = c.base;
  for (const auto& [out, pay] : c.payments) p += outcome_probability(s, i, out) * pay;
  return p;
}

double sparse_payment(const ExplicitSetting& s, std::size_t i, const SparseContract& c) {
  double p = c.base;
  for (const auto& [out, pay] : c.payments) p += outcome_probability(s, i, out) * pay;
  return p;
}

double separable_payment(const ProductSetting& s, std::size_t i, const std::vector<double>& items) {
  if (items.empty()) return 0.0;
  return dot(s.probs()[i], items);
}

double separable_payment(const ExplicitSetting& s, std::size_t i, const std::vector<double>& items) {
  if (items.empty()) return 0.0;
  double p = 0.0;
  const auto& row = s.dist()[i];
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] == 0.0) continue;
    double pay = 0.0;
    for (std::size_t j : Outcome(k).items()) pay += items[j];
    p += row[k] * pay;
  }
  return p;
}

template <class S>
double payment_impl(const S& setting, std::size_t action, const Contract& contract) {
  if (action >= setting.num_actions()) throw ArgumentError(idx_msg("action", action, setting.num_actions()));
  check_contract(setting, contract);
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SparseContract>) {
          return sparse_payment(setting, action, c);
        } else if constexpr (std::is_same_v<T, LinearContract>) {
          return c.alpha * setting.expected_reward(action);
        } else if constexpr (std::is_same_v<T, SeparableContract>) {
          return separable_payment(setting, action, c.item_payments);
        } else {
          return sparse_payment(setting, action, c.sparse) +
                 separable_payment(setting, action, c.item_payments) +
                 c.alpha * setting.expected_reward(action);
        }
      },
      contract);
}

}  // namespace

double expected_payment(const ProductSetting& setting, std::size_t action, const Contract& contract) {
  return payment_impl(setting, action, contract);
}

double expected_payment(const ExplicitSetting& setting, std::size_t action, const Contract& contract) {
  return payment_impl(setting, action, contract);
}

double expected_payment(const Setting& setting, std::size_t action, const Contract& contract) {
  return std::visit([&](const auto& s) { return expected_payment(s, action, contract); }, setting);
}

std::size_t num_actions(const Setting& setting) {
  return std::visit([](const auto& s) { return s.num_actions(); }, setting);
}

const std::vector<double>& costs(const Setting& setting) {
  return std::visit([](const auto& s) -> const std::vector<double>& { return s.costs(); }, setting);
}

const std::vector<double>& expected_rewards(const Setting& setting) {
  return std::visit([](const auto& s) -> const std::vector<double>& { return s.expected_rewards(); },
                    setting);
}

double magnitude(const ProductSetting& setting) {
  double m = 1.0;
  for (double r : setting.expected_rewards()) m = std::max(m, r);
  for (double c : setting.costs()) m = std::max(m, c);
  return m;
}

double magnitude(const ExplicitSetting& setting) {
  double m = 1.0;
  for (double r : setting.expected_rewards()) m = std::max(m, r);
  for (double c : setting.costs()) m = std::max(m, c);
  return m;
}

double magnitude(const Setting& setting) {
  return std::visit([](const auto& s) { return magnitude(s); }, setting);
}

bool is_normalized(const Setting& setting, double tol) {
  for (double r : expected_rewards(setting)) {
    if (r > 1.0 + tol) return false;
  }
  return true;
}

ActionValues evaluate(const Setting& setting, const Contract& contract) {
  const std::size_t n = num_actions(setting);
  const auto& c = costs(setting);
  const auto& r = expected_rewards(setting);
  std::visit([&](const auto& s) { check_contract(s, contract); }, setting);
  ActionValues v;
  v.payments.resize(n);
  v.utilities.resize(n);
  v.payoffs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.payments[i] = expected_payment(setting, i, contract);
    v.utilities[i] = v.payments[i] - c[i];
    v.payoffs[i] = r[i] - v.payments[i];
  }
  return v;
}

AgentChoice best_response(const Setting& setting, const Contract& contract, double tol_tie) {
  const ActionValues v = evaluate(setting, contract);
  const double top = *std::max_element(v.utilities.begin(), v.utilities.end());
  std::size_t best = v.utilities.size();
  for (std::size_t i = 0; i < v.utilities.size(); ++i) {
    if (v.utilities[i] < top - tol_tie) continue;
    if (best == v.utilities.size() || v.payoffs[i] > v.payoffs[best] + tol_tie) best = i;
  }
  return {best, v.utilities[best], v.payoffs[best]};
}

namespace {

double slack_from(const ActionValues& v, const std::vector<double>& c, std::size_t action, double delta,
                  ICNotion notion) {
  const double own = notion == ICNotion::Additive ? v.utilities[action] + delta
                                                   : (1.0 + delta) * v.payments[action] - c[action];
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.utilities.size(); ++k) {
    if (k == action) continue;
    worst = std::min(worst, own - v.utilities[k]);
  }
  // a single action is trivially incentivized; report its own margin as 0
  return std::isinf(worst) ? 0.0 : worst;
}

void additive_guard(const Setting& setting, ICNotion notion) {
  if (notion == ICNotion::Additive && !is_normalized(setting)) {
    warn("additive delta-IC check on an unnormalized setting (some R_i > 1)");
  }
}

}  // namespace

double ic_slack(const Setting& setting, const Contract& contract, std::size_t action, double delta,
                ICNotion notion) {
  require(finite(delta) && delta >= 0.0, "delta must be finite and >= 0");
  if (action >= num_actions(setting)) throw ArgumentError(idx_msg("action", action, num_actions(setting)));
  additive_guard(setting, notion);
  return slack_from(evaluate(setting, contract), costs(setting), action, delta, notion);
}

bool verify_delta_ic(const Setting& setting, const Contract& contract, std::size_t action, double delta,
                     ICNotion notion, double tol) {
  return ic_slack(setting, contract, action, delta, notion) >= -tol * magnitude(setting);
}

AgentChoice delta_best_response(const Setting& setting, const Contract& contract, double delta,
                                ICNotion notion, bool require_ir, double tol) {
  require(finite(delta) && delta >= 0.0, "delta must be finite and >= 0");
  additive_guard(setting, notion);
  const ActionValues v = evaluate(setting, contract);
  const auto& c = costs(setting);
  const double t = tol * magnitude(setting);
  std::size_t best = v.utilities.size();
  for (std::size_t i = 0; i < v.utilities.size(); ++i) {
    if (slack_from(v, c, i, delta, notion) < -t) continue;
    if (require_ir && v.utilities[i] < -t) continue;
    if (best == v.utilities.size() || v.payoffs[i] > v.payoffs[best] + kTieTolerance) best = i;
  }
  if (best == v.utilities.size()) throw InstanceError("no action is delta-incentivized by the contract");
  return {best, v.utilities[best], v.payoffs[best]};
}

ExplicitSetting product_to_explicit(const ProductSetting& setting, std::size_t max_items) {
  const std::size_t m = setting.num_items();
  if (m > max_items) {
    throw CapacityError("cannot enumerate 2^" + std::to_string(m) + " outcomes (limit m <= " +
                        std::to_string(max_items) + ")");
  }
  const std::size_t k = std::size_t{1} << m;
  std::vector<double> rewards(k, 0.0);
  for (std::size_t s = 1; s < k; ++s) {
    // r_S extends r_{S minus lowest item}
    const std::size_t low = std::countr_zero(s);
    rewards[s] = rewards[s & (s - 1)] + setting.reward(low);
  }
  std::vector<std::vector<double>> dist(setting.num_actions(), std::vector<double>(k));
  for (std::size_t i = 0; i < setting.num_actions(); ++i) {
    auto& row = dist[i];
    row[0] = 1.0;
    // grow the table one item at a time: entries [0,2^j) cover items < j
    for (std::size_t j = 0; j < m; ++j) {
      const double q = setting.prob(i, j);
      const std::size_t half = std::size_t{1} << j;
      for (std::size_t s = 0; s < half; ++s) {
        row[s + half] = row[s] * q;
        row[s] *= 1.0 - q;
      }
    }
    // absorb rounding so rows sum to 1 within the explicit-setting tolerance
    double sum = 0.0;
    for (double x : row) sum += x;
    for (double& x : row) x /= sum;
  }
  return ExplicitSetting(setting.costs(), std::move(rewards), std::move(dist));
}

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void warn(std::string_view message) {
  std::lock_guard lock(g_sink_mutex);
  if (g_sink) g_sink(message);
}

}  // namespace cforge

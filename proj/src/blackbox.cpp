#include "cforge/blackbox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cforge/exact.hpp"

namespace cforge {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  std::uint64_t z = base + (trial + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

QueryOracle::QueryOracle(Setting hidden, std::uint64_t seed)
    : hidden_(std::move(hidden)), seed_(seed), rng_(seed) {}

double QueryOracle::reward(Outcome s) const {
  if (const auto* p = std::get_if<ProductSetting>(&hidden_)) return p->outcome_reward(s);
  return std::get<ExplicitSetting>(hidden_).outcome_reward(s.bits());
}

Outcome QueryOracle::sample(std::size_t action) {
  if (action >= num_actions()) throw ArgumentError("action out of range");
  ++queries_;
  if (const auto* p = std::get_if<ProductSetting>(&hidden_)) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < p->num_items(); ++j) {
      if (uniform01(rng_) < p->prob(action, j)) bits |= std::uint64_t{1} << j;
    }
    return Outcome(bits);
  }
  const auto& e = std::get<ExplicitSetting>(hidden_);
  const auto row = e.row(action);
  const double u = uniform01(rng_);
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] <= 0.0) continue;
    last = k;
    cum += row[k];
    if (u < cum) return Outcome(k);
  }
  return Outcome(last);  // u beyond the rounded total
}

std::optional<std::size_t> EmpiricalModel::position(Outcome s) const {
  auto it = std::lower_bound(outcomes.begin(), outcomes.end(), s);
  if (it == outcomes.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - outcomes.begin());
}

double EmpiricalModel::tilde_q(std::size_t action, Outcome s) const {
  const auto k = position(s);
  if (!k) return 0.0;
  return static_cast<double>(counts.at(action)[*k]) / static_cast<double>(samples);
}

std::size_t required_samples(std::size_t n, double eta, double eps, double gamma) {
  if (n < 1) throw ArgumentError("n must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in (0,1]");
  if (!(eps > 0.0 && eps <= 0.5)) throw ArgumentError("eps must lie in (0,1/2]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0,1)");
  const double s = 3.0 * std::log(2.0 * static_cast<double>(n) / (eta * gamma)) / (eta * eps * eps);
  if (!(s < 1e15)) throw CapacityError("required sample count is too large");
  return static_cast<std::size_t>(std::ceil(s));
}

EmpiricalModel estimate(QueryOracle& oracle, std::size_t s) {
  if (s < 1) throw ArgumentError("s must be >= 1");
  const std::size_t n = oracle.num_actions();
  std::vector<std::map<Outcome, std::size_t>> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < s; ++t) ++seen[i][oracle.sample(i)];
  }
  EmpiricalModel model;
  model.samples = s;
  for (const auto& m : seen) {
    for (const auto& [o, c] : m) model.outcomes.push_back(o);
  }
  std::sort(model.outcomes.begin(), model.outcomes.end());
  model.outcomes.erase(std::unique(model.outcomes.begin(), model.outcomes.end()), model.outcomes.end());

  const std::size_t k = model.outcomes.size();
  model.counts.assign(n, std::vector<std::size_t>(k, 0));
  std::vector<std::vector<double>> dist(n, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [o, c] : seen[i]) {
      const std::size_t pos = *model.position(o);
      model.counts[i][pos] = c;
      dist[i][pos] = static_cast<double>(c) / static_cast<double>(s);
    }
  }
  std::vector<double> rewards(k);
  for (std::size_t j = 0; j < k; ++j) rewards[j] = oracle.reward(model.outcomes[j]);
  model.setting = ExplicitSetting(oracle.costs(), std::move(rewards), std::move(dist), false);
  return model;
}

namespace {

ExplicitSetting as_explicit(const Setting& setting) {
  if (const auto* p = std::get_if<ProductSetting>(&setting)) return product_to_explicit(*p);
  return std::get<ExplicitSetting>(setting);
}

}  // namespace

double min_positive_probability(const Setting& setting) {
  const ExplicitSetting e = as_explicit(setting);
  double eta = 1.0;
  for (const auto& row : e.dist()) {
    for (double q : row) {
      if (q > 0.0) eta = std::min(eta, q);
    }
  }
  return eta;
}

bool within_relative_error(const Setting& truth, const EmpiricalModel& model, double eps) {
  const ExplicitSetting e = as_explicit(truth);
  for (std::size_t i = 0; i < e.num_actions(); ++i) {
    for (std::size_t k = 0; k < e.num_outcomes(); ++k) {
      const double q = e.prob(i, k);
      const double t = model.tilde_q(i, Outcome(k));
      if (q == 0.0) {
        if (t != 0.0) return false;
      } else if (t < (1.0 - eps) * q || t > (1.0 + eps) * q) {
        return false;
      }
    }
  }
  return true;
}

SparseContract to_true_outcomes(const EmpiricalModel& model, const SparseContract& contract) {
  SparseContract out;
  out.base = contract.base;
  for (const auto& [s, p] : contract.payments) out.payments[model.outcomes.at(s.bits())] = p;
  return out;
}

SparseContract to_empirical_outcomes(const EmpiricalModel& model, const SparseContract& contract) {
  SparseContract out;
  out.base = contract.base;
  for (const auto& [s, p] : contract.payments) {
    if (const auto k = model.position(s)) out.payments[Outcome(*k)] = p;
  }
  return out;
}

BlackBoxResult blackbox_contract(QueryOracle& oracle, double eps, double gamma, std::optional<double> eta) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ArgumentError("eps must lie in (0,1/2]");
  const Setting& truth = oracle.hidden();
  if (!is_normalized(truth)) throw ArgumentError("black-box contracting needs a normalized setting");

  BlackBoxResult res;
  res.eta = eta ? *eta : min_positive_probability(truth);
  res.samples = required_samples(oracle.num_actions(), res.eta, eps, gamma);
  res.claimed_delta = 4.0 * eps;
  const EmpiricalModel model = estimate(oracle, res.samples);
  res.event_holds = within_relative_error(truth, model, eps);

  const Setting empirical = model.setting;
  const OptContractResult learned = opt_contract(model.setting, 2.0 * eps, ICNotion::Additive);
  const SparseContract& tilde = std::get<SparseContract>(learned.contract);
  res.action = learned.action;
  res.contract = to_true_outcomes(model, tilde);
  res.payoff_empirical = expected_reward(empirical, res.action) - expected_payment(empirical, res.action, tilde);
  res.payoff_on_true =
      expected_reward(truth, res.action) - expected_payment(truth, res.action, res.contract);
  res.ic_slack = ic_slack(truth, res.contract, res.action, 0.0, ICNotion::Additive);
  res.payoff_gap = res.payoff_on_true - res.payoff_empirical;

  const OptContractResult best = opt_contract(truth);
  res.opt = best.payoff;
  res.payoff_bound = best.payoff - 5.0 * eps;
  const SparseContract& star = std::get<SparseContract>(best.contract);
  const SparseContract star_emp = to_empirical_outcomes(model, star);
  res.true_opt_slack_on_empirical = ic_slack(empirical, star_emp, best.action, 0.0, ICNotion::Additive);
  res.payment_gap = expected_payment(empirical, best.action, star_emp) -
                    expected_payment(truth, best.action, star);
  return res;
}

double NegativePair::query_lower_bound(double gamma) const { return -std::log(gamma) / (9.0 * std::sqrt(eta)); }

double NegativePair::symmetric_payoff_bound(double delta) const {
  const double c2 = first.cost(1);
  return reward_high - (tau * tau * (1.0 - 2.0 * mu) + 1.0) / ((tau - 1.0) * (tau - 1.0)) * (c2 - delta);
}

double NegativePair::observation_probability(std::size_t queries) const {
  return 1.0 - std::pow(1.0 - tau * tau * mu, static_cast<double>(queries));
}

NegativePair negative_pair(double eta) {
  if (!(eta > 0.0 && eta <= 1.0 / 625.0)) throw ArgumentError("eta must lie in (0, 1/625]");
  NegativePair np;
  np.eta = eta;
  np.tau = 1.0 + std::sqrt(2.0);
  const double t = np.tau;
  np.mu = std::sqrt(eta) / t;
  np.beta = 1.0 / (1.0 + 1.0 / (t * t));
  const double mu = np.mu;
  const double r = np.beta / (t * t * mu);
  const double c2 = (t - 1.0) / (t * t * t) * np.beta / (1.0 - mu);
  np.first = ProductSetting({0.0, c2}, {r, r}, {{t * mu, t * mu}, {t * t * mu, mu}});
  np.second = ProductSetting({0.0, c2}, {r, r}, {{t * mu, t * mu}, {mu, t * t * mu}});
  np.reward_low = 2.0 * np.beta / t;
  np.reward_high = (1.0 + 1.0 / (t * t)) * np.beta;
  np.benchmark = np.beta;
  return np;
}

ObservationExperiment observe_negative_pair(const NegativePair& pair, std::size_t queries,
                                            std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ArgumentError("trials must be >= 1");
  QueryOracle oracle(pair.first, seed);
  ObservationExperiment ex;
  ex.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    bool hit = false;
    for (std::size_t q = 0; q < queries; ++q) hit |= oracle.sample(1).contains(0);
    ex.hits += hit ? 1 : 0;
  }
  ex.frequency = static_cast<double>(ex.hits) / static_cast<double>(trials);
  ex.predicted = pair.observation_probability(queries);
  ex.standard_error = std::sqrt(ex.predicted * (1.0 - ex.predicted) / static_cast<double>(trials));
  return ex;
}

}  // namespace cforge

#include "cforge/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cforge {

MinPaymentResult min_payment(const ExplicitSetting& setting, std::size_t action, double delta,
                             ICNotion notion, const lp::Tolerances& tol) {
  const std::size_t n = setting.num_actions();
  if (action >= n) throw ArgumentError("action index out of range");
  if (!std::isfinite(delta) || delta < 0.0) throw ArgumentError("delta must be finite and >= 0");

  MinPaymentResult res;
  res.action = action;
  if (n == 1) return res;

  // Variables t_S = q_{i,S} p_S over the support of action i.
  const auto& qi = setting.dist()[action];
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < qi.size(); ++k) {
    if (qi[k] > 0.0) support.push_back(k);
  }
  const double boost = notion == ICNotion::Multiplicative ? delta : 0.0;
  const double slack = notion == ICNotion::Additive ? delta : 0.0;

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  prog.objective.assign(support.size(), 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == action) continue;
    const auto& qk = setting.dist()[k];
    std::vector<double> row(support.size());
    for (std::size_t s = 0; s < support.size(); ++s) {
      row[s] = (1.0 + boost) - qk[support[s]] / qi[support[s]];
    }
    prog.add(std::move(row), lp::Relation::GreaterEq, setting.cost(action) - setting.cost(k) - slack);
  }

  const lp::LPSolution sol = lp::solve_lp(prog, tol);
  if (sol.status != lp::Status::Optimal) {
    res.status = Implementability::NotImplementable;
    res.expected_payment = std::numeric_limits<double>::infinity();
    return res;
  }
  double total = 0.0;
  for (double t : sol.primal) total += t;
  const double floor = 1e-14 * std::max(1.0, total);
  std::map<Outcome, double> pay;
  double kept = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const double t = sol.primal[s];
    if (t <= floor) continue;
    pay.emplace(Outcome(support[s]), t / qi[support[s]]);
    kept += t;
  }
  res.contract = make_sparse(0.0, std::move(pay));
  res.expected_payment = kept;
  return res;
}

MinPaymentResult min_payment(const ProductSetting& setting, std::size_t action, double delta,
                             ICNotion notion, const lp::Tolerances& tol) {
  return min_payment(product_to_explicit(setting), action, delta, notion, tol);
}

OptContractResult opt_contract(const ExplicitSetting& setting, double delta, ICNotion notion,
                               const lp::Tolerances& tol) {
  const std::size_t n = setting.num_actions();
  OptContractResult best;
  best.action_payoffs.assign(n, -std::numeric_limits<double>::infinity());
  bool found = false;
  const double tie = 1e-9 * magnitude(setting);
  for (std::size_t i = 0; i < n; ++i) {
    MinPaymentResult mp = min_payment(setting, i, delta, notion, tol);
    if (mp.status == Implementability::NotImplementable) continue;
    const double payoff = setting.expected_reward(i) - mp.expected_payment;
    best.action_payoffs[i] = payoff;
    if (!found || payoff > best.payoff + tie) {
      found = true;
      best.payoff = payoff;
      best.action = i;
      best.contract = std::move(mp.contract);
    }
  }
  // The zero contract always implements something, so some action qualifies.
  if (!found) throw InstanceError("no action is implementable");
  return best;
}

OptContractResult opt_contract(const ProductSetting& setting, double delta, ICNotion notion,
                               const lp::Tolerances& tol) {
  return opt_contract(product_to_explicit(setting), delta, notion, tol);
}

OptContractResult opt_contract(const Setting& setting, double delta, ICNotion notion,
                               const lp::Tolerances& tol) {
  return std::visit([&](const auto& s) { return opt_contract(s, delta, notion, tol); }, setting);
}

double first_best(const ProductSetting& setting) { return first_best(Setting(setting)); }
double first_best(const ExplicitSetting& setting) { return first_best(Setting(setting)); }

double first_best(const Setting& setting) {
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) best = std::max(best, r[i] - c[i]);
  return best;
}

}  // namespace cforge

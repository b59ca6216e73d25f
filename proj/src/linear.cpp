#include "cforge/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cforge/exact.hpp"
#include "cforge/lp.hpp"

namespace cforge {

namespace {

bool same_reward(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

std::vector<double> Envelope::breakpoints() const {
  std::vector<double> out;
  for (const auto& s : segments) out.push_back(s.left);
  return out;
}

std::size_t Envelope::locate(double alpha) const {
  std::size_t k = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].left <= alpha) k = s;
  }
  return k;
}

double indifference_alpha(const Setting& setting, std::size_t a, std::size_t b) {
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);
  if (same_reward(r[a], r[b])) throw ArgumentError("actions with equal R have no indifference alpha");
  return (c[b] - c[a]) / (r[b] - r[a]);
}

Envelope upper_envelope(const Setting& setting) {
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);
  const std::size_t n = r.size();
  Envelope env;

  std::vector<char> alive(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k || !same_reward(r[i], r[k])) continue;
      // keep the cheaper line; identical lines keep the lower index
      if (c[k] < c[i] || (c[k] == c[i] && k < i)) {
        alive[i] = 0;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) env.shadowed.push_back(i);
  }
  if (!env.shadowed.empty()) {
    warn("envelope: " + std::to_string(env.shadowed.size()) +
         " action(s) share R_i with a cheaper action and are ignored");
  }

  // At alpha = 0 the cheapest action wins; among those the highest R.
  std::size_t cur = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    if (cur == n || c[i] < c[cur] || (c[i] == c[cur] && r[i] > r[cur])) cur = i;
  }
  double at = 0.0;
  while (true) {
    env.segments.push_back({cur, at, 1.0});
    std::size_t next = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || r[k] <= r[cur] || same_reward(r[k], r[cur])) continue;
      const double x = std::max(at, (c[k] - c[cur]) / (r[k] - r[cur]));
      if (x < best - 1e-15 || (x <= best + 1e-15 && r[k] > r[next])) {
        best = std::min(best, x);
        next = k;
      }
    }
    if (next == n || best > 1.0) break;
    env.segments.back().right = best;
    cur = next;
    at = best;
  }
  return env;
}

LinearChoice optimal_linear(const Setting& setting, double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0)) throw ArgumentError("delta must be finite and >= 0");
  if (delta > 0.0 && !is_normalized(setting)) warn("additive delta-IC on an unnormalized setting");
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);
  const std::size_t n = r.size();
  LinearChoice best{0.0, 0, -std::numeric_limits<double>::infinity()};
  const double tie = 1e-12 * magnitude(setting);

  if (delta == 0.0) {
    for (const auto& seg : upper_envelope(setting).segments) {
      const double payoff = (1.0 - seg.left) * r[seg.action];
      if (payoff > best.payoff + tie) best = {seg.left, seg.action, payoff};
    }
    return best;
  }

  // For each action: smallest alpha in [0,1] with
  // alpha (R_i - R_k) >= c_i - c_k - delta for all k.
  for (std::size_t i = 0; i < n; ++i) {
    double lo = 0.0, hi = 1.0;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (k == i) continue;
      const double need = c[i] - c[k] - delta;
      const double dr = r[i] - r[k];
      if (dr > 0.0) {
        lo = std::max(lo, need / dr);
      } else if (dr < 0.0) {
        hi = std::min(hi, need / dr);
      } else if (need > 0.0) {
        ok = false;
      }
    }
    if (!ok || lo > hi + 1e-12) continue;
    const double payoff = (1.0 - lo) * r[i];
    if (payoff > best.payoff + tie) best = {lo, i, payoff};
  }
  return best;
}

SeparableChoice optimal_separable(const ProductSetting& setting, double delta) {
  if (!(std::isfinite(delta) && delta >= 0.0)) throw ArgumentError("delta must be finite and >= 0");
  const std::size_t n = setting.num_actions();
  const std::size_t m = setting.num_items();
  SeparableChoice best;
  best.payoff = -std::numeric_limits<double>::infinity();
  const double tie = 1e-9 * magnitude(setting);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> pay(m, 0.0);
    double expected = 0.0;
    if (n > 1) {
      lp::LinearProgram prog;
      prog.objective = setting.probs()[i];
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = setting.prob(i, j) - setting.prob(k, j);
        prog.add(std::move(row), lp::Relation::GreaterEq, setting.cost(i) - setting.cost(k) - delta);
      }
      const lp::LPSolution sol = lp::solve_lp(prog);
      if (sol.status != lp::Status::Optimal) continue;
      pay = sol.primal;
      for (double& p : pay) p = std::max(p, 0.0);
      expected = std::inner_product(pay.begin(), pay.end(), setting.probs()[i].begin(), 0.0);
    }
    const double payoff = setting.expected_reward(i) - expected;
    if (payoff > best.payoff + tie) {
      best.payoff = payoff;
      best.action = i;
      best.item_payments = std::move(pay);
    }
  }
  return best;
}

LinearApproxResult approx_linear_delta(const Setting& setting, double delta, double gamma) {
  if (!(std::isfinite(delta) && delta > 0.0)) throw ArgumentError("delta must be > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("gamma must lie in (0,1)");
  if (!is_normalized(setting)) warn("linear approximation on an unnormalized setting");
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);

  LinearApproxResult res;
  res.kappa = static_cast<int>(std::ceil(std::log(1.0 / gamma) / std::log1p(delta)));
  res.kappa = std::max(res.kappa, 1);
  res.interval_left.push_back(0.0);
  for (int k = 2; k <= res.kappa + 1; ++k) {
    res.interval_left.push_back(std::min(1.0, gamma * std::pow(1.0 + delta, k - 2)));
  }
  auto interval_of = [&](double alpha) {
    std::size_t k = 1;
    for (std::size_t idx = 0; idx < res.interval_left.size(); ++idx) {
      if (res.interval_left[idx] <= alpha) k = idx + 1;
    }
    return k;
  };

  const Envelope env = upper_envelope(setting);
  // h(k): the last (highest-R) envelope action whose alpha lies in interval k.
  std::vector<std::size_t> chain, chain_interval;
  std::vector<double> chain_alpha;
  for (const auto& seg : env.segments) {
    const std::size_t k = interval_of(seg.left);
    if (!chain_interval.empty() && chain_interval.back() == k) {
      chain.back() = seg.action;
      chain_alpha.back() = seg.left;
    } else {
      chain.push_back(seg.action);
      chain_interval.push_back(k);
      chain_alpha.push_back(seg.left);
    }
  }

  auto check = [&](double alpha, std::size_t action) {
    return verify_delta_ic(setting, LinearContract{alpha}, action, delta, ICNotion::Additive);
  };

  res.telescoped = r[chain[0]];
  res.candidates.push_back({chain_alpha[0], chain[0], (1.0 - chain_alpha[0]) * r[chain[0]],
                            chain_interval[0], check(chain_alpha[0], chain[0])});
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const std::size_t prev = chain[k - 1], cur = chain[k];
    const double alpha = std::clamp((c[cur] - c[prev]) / (r[cur] - r[prev]), 0.0, 1.0);
    const double payoff = (1.0 - alpha) * r[cur];
    res.telescoped += payoff;
    res.candidates.push_back({alpha, cur, payoff, chain_interval[k], check(alpha, cur)});
  }

  bool first = true;
  for (const auto& cand : res.candidates) {
    if (first || cand.payoff > res.payoff + 1e-15) {
      res.alpha = cand.alpha;
      res.action = cand.action;
      res.payoff = cand.payoff;
      first = false;
    }
  }
  res.welfare = first_best(setting);
  res.guarantee = (1.0 - gamma) / (res.kappa + 1) * res.welfare;
  return res;
}

std::vector<std::pair<std::size_t, std::size_t>> welfare_gap_violations(const Setting& setting,
                                                                         double tol) {
  const auto& r = expected_rewards(setting);
  const auto& c = costs(setting);
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (!(r[i] > r[k]) || same_reward(r[i], r[k])) continue;
      if (r[i] - c[i] < r[k] - c[k]) continue;
      const double alpha = (c[i] - c[k]) / (r[i] - r[k]);
      if ((r[i] - c[i]) - (r[k] - c[k]) > (1.0 - alpha) * r[i] + tol) bad.emplace_back(i, k);
    }
  }
  return bad;
}

}  // namespace cforge

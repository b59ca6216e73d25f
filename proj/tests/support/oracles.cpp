#include "support/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls f on every k-subset of {0..n-1}.
template <class F>
void subsets(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<VertexSolution> vertex_lp_min(const std::vector<double>& c,
                                            const std::vector<std::vector<double>>& A,
                                            const std::vector<double>& b) {
  const std::size_t nv = c.size(), nr = A.size();
  std::optional<VertexSolution> best;
  auto consider = [&](const std::vector<double>& x) {
    for (std::size_t r = 0; r < nr; ++r) {
      double lhs = 0.0, mag = std::abs(b[r]);
      for (std::size_t j = 0; j < nv; ++j) {
        lhs += A[r][j] * x[j];
        mag = std::max(mag, std::abs(A[r][j] * x[j]));
      }
      if (lhs < b[r] - 1e-9 * std::max(1.0, mag)) return;
    }
    for (double v : x) {
      if (v < -1e-9) return;
    }
    double val = 0.0;
    for (std::size_t j = 0; j < nv; ++j) val += c[j] * x[j];
    if (!best || val < best->value) best = VertexSolution{val, x};
  };
  consider(std::vector<double>(nv, 0.0));
  for (std::size_t k = 1; k <= std::min(nv, nr); ++k) {
    subsets(nv, k, [&](const std::vector<std::size_t>& cols) {
      subsets(nr, k, [&](const std::vector<std::size_t>& rows) {
        Eigen::MatrixXd M(k, k);
        Eigen::VectorXd rhs(k);
        for (std::size_t a = 0; a < k; ++a) {
          for (std::size_t d = 0; d < k; ++d) M(a, d) = A[rows[a]][cols[d]];
          rhs(a) = b[rows[a]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd sol = lu.solve(rhs);
        std::vector<double> x(nv, 0.0);
        for (std::size_t d = 0; d < k; ++d) x[cols[d]] = sol(d);
        consider(x);
      });
    });
  }
  return best;
}

double product_probability(const cforge::ProductSetting& s, std::size_t action, std::uint64_t bits) {
  double p = 1.0;
  for (std::size_t j = 0; j < s.num_items(); ++j) {
    const double q = s.prob(action, j);
    p *= ((bits >> j) & 1u) ? q : 1.0 - q;
  }
  return p;
}

std::vector<std::vector<double>> product_table(const cforge::ProductSetting& s) {
  const std::size_t k = std::size_t{1} << s.num_items();
  std::vector<std::vector<double>> t(s.num_actions(), std::vector<double>(k));
  for (std::size_t i = 0; i < s.num_actions(); ++i) {
    for (std::size_t b = 0; b < k; ++b) t[i][b] = product_probability(s, i, b);
  }
  return t;
}

std::vector<double> product_outcome_rewards(const cforge::ProductSetting& s) {
  const std::size_t k = std::size_t{1} << s.num_items();
  std::vector<double> r(k, 0.0);
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t j = 0; j < s.num_items(); ++j) {
      if ((b >> j) & 1u) r[b] += s.reward(j);
    }
  }
  return r;
}

double min_payment(const std::vector<std::vector<double>>& dist, const std::vector<double>& costs,
                   std::size_t action, double delta, bool multiplicative) {
  const std::size_t n = dist.size(), k = dist[action].size();
  // Outcomes the target never produces are worthless to pay on.
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < k; ++s) {
    if (dist[action][s] > 0.0) support.push_back(s);
  }
  std::vector<double> c;
  for (std::size_t s : support) c.push_back(dist[action][s]);
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (std::size_t o = 0; o < n; ++o) {
    if (o == action) continue;
    std::vector<double> row;
    for (std::size_t s : support) {
      const double own = multiplicative ? (1.0 + delta) * dist[action][s] : dist[action][s];
      row.push_back(own - dist[o][s]);
    }
    A.push_back(std::move(row));
    b.push_back(costs[action] - costs[o] - (multiplicative ? 0.0 : delta));
  }
  const auto sol = vertex_lp_min(c, A, b);
  return sol ? sol->value : kInf;
}

double min_payment(const cforge::ExplicitSetting& s, std::size_t action, double delta, bool multiplicative) {
  return min_payment(s.dist(), s.costs(), action, delta, multiplicative);
}

double min_payment(const cforge::ProductSetting& s, std::size_t action, double delta, bool multiplicative) {
  return min_payment(product_table(s), s.costs(), action, delta, multiplicative);
}

namespace {

double opt_from_table(const std::vector<std::vector<double>>& dist, const std::vector<double>& rewards,
                      const std::vector<double>& costs, double delta, bool multiplicative) {
  double best = -kInf;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double R = 0.0;
    for (std::size_t s = 0; s < rewards.size(); ++s) R += dist[i][s] * rewards[s];
    best = std::max(best, R - min_payment(dist, costs, i, delta, multiplicative));
  }
  return best;
}

}  // namespace

double opt_payoff(const cforge::ExplicitSetting& s, double delta, bool multiplicative) {
  return opt_from_table(s.dist(), s.outcome_rewards(), s.costs(), delta, multiplicative);
}

double opt_payoff(const cforge::ProductSetting& s, double delta, bool multiplicative) {
  return opt_from_table(product_table(s), product_outcome_rewards(s), s.costs(), delta, multiplicative);
}

double min_ratio(const cforge::SeparationInstance& inst) {
  const std::size_t m = inst.reference.size();
  double best = kInf;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b) {
    auto prob = [&](const std::vector<double>& q) {
      double p = 1.0;
      for (std::size_t j = 0; j < m; ++j) p *= ((b >> j) & 1u) ? q[j] : 1.0 - q[j];
      return p;
    };
    const double ref = prob(inst.reference);
    if (ref <= 0.0) continue;
    double num = 0.0;
    for (std::size_t k = 0; k < inst.weights.size(); ++k) num += inst.weights[k] * prob(inst.mixtures[k]);
    best = std::min(best, num / ref);
  }
  return best;
}

double linear_opt_payoff(const std::vector<double>& R, const std::vector<double>& c) {
  const std::size_t n = R.size();
  std::vector<double> alphas{0.0};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (R[b] > R[a]) {
        const double x = (c[b] - c[a]) / (R[b] - R[a]);
        if (x >= 0.0 && x <= 1.0) alphas.push_back(x);
      }
    }
  }
  double best = -kInf;
  for (double alpha : alphas) {
    double top = -kInf;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, alpha * R[i] - c[i]);
    // principal-favoring among near-ties
    double pay = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha * R[i] - c[i] >= top - 1e-9) pay = std::max(pay, (1.0 - alpha) * R[i]);
    }
    best = std::max(best, pay);
  }
  return best;
}

double separable_opt_payoff(const cforge::ProductSetting& s, double delta) {
  const std::size_t n = s.num_actions(), m = s.num_items();
  double best = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      std::vector<double> row(m);
      for (std::size_t j = 0; j < m; ++j) row[j] = s.prob(i, j) - s.prob(k, j);
      A.push_back(std::move(row));
      b.push_back(s.cost(i) - s.cost(k) - delta);
    }
    const auto sol = vertex_lp_min(s.probs()[i], A, b);
    if (!sol) continue;
    double R = 0.0;
    for (std::size_t j = 0; j < m; ++j) R += s.prob(i, j) * s.reward(j);
    best = std::max(best, R - sol->value);
  }
  return best;
}

double ic_slack(const std::vector<double>& payments, const std::vector<double>& costs, std::size_t action,
                double delta, bool multiplicative) {
  const double own = multiplicative ? (1.0 + delta) * payments[action] - costs[action]
                                    : payments[action] - costs[action] + delta;
  double worst = kInf;
  for (std::size_t k = 0; k < payments.size(); ++k) {
    if (k != action) worst = std::min(worst, own - (payments[k] - costs[k]));
  }
  return payments.size() == 1 ? 0.0 : worst;
}

std::vector<double> sparse_payments(const std::vector<std::vector<double>>& dist,
                                    const cforge::SparseContract& contract) {
  std::vector<double> out(dist.size(), contract.base);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (const auto& [s, p] : contract.payments) {
      if (s.bits() < dist[i].size()) out[i] += dist[i][s.bits()] * p;
    }
  }
  return out;
}

}  // namespace oracle

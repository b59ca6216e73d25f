#include "cforge/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "cforge/blackbox.hpp"

namespace cforge {

ProductSetting gen_gap(int c, double gamma) {
  if (c < 2) throw ArgumentError("gap setting needs c >= 2");
  if (!(gamma > 0.0 && gamma <= 0.25)) throw ArgumentError("gamma must lie in (0, 1/4]");
  std::vector<double> costs(c);
  std::vector<std::vector<double>> probs(c);
  for (int i = 1; i <= c; ++i) {
    probs[i - 1] = {std::pow(gamma, c - i)};
    costs[i - 1] = i == 1 ? 0.0 : 1.0 / std::pow(gamma, i - 1) - i + (i - 1) * gamma;
  }
  return ProductSetting(std::move(costs), {1.0 / std::pow(gamma, c - 1)}, std::move(probs));
}

namespace {

std::vector<std::vector<double>> sat_rows(const CNF& formula) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < formula.clauses.size(); ++i) {
    const auto& clause = formula.clauses[i];
    if (clause.empty()) throw ParseError("clause " + std::to_string(i + 1) + " is empty");
    if (clause.size() > 3) throw ParseError("clause " + std::to_string(i + 1) + " has more than 3 literals");
    std::vector<double> row(formula.num_vars, 0.5);
    std::set<std::size_t> seen;
    for (const auto& lit : clause) {
      if (lit.var >= formula.num_vars) throw ParseError("literal variable out of range");
      if (!seen.insert(lit.var).second) {
        throw ParseError("clause " + std::to_string(i + 1) + " repeats a variable");
      }
      row[lit.var] = lit.negated ? 1.0 : 0.0;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("formula has no clauses");
  return rows;
}

}  // namespace

ProductSetting gen_sat(const CNF& formula) {
  auto rows = sat_rows(formula);
  std::vector<double> costs(rows.size(), 0.0);
  return ProductSetting(std::move(costs), std::vector<double>(formula.num_vars, 0.0), std::move(rows));
}

ProductSetting gen_productc(const CNF& formula, int c, double epsilon) {
  const ProductSetting gap = gen_gap(c, epsilon);
  const auto block = sat_rows(formula);
  const std::size_t m = formula.num_vars;
  std::vector<std::vector<double>> probs;
  std::vector<double> costs;
  for (int b = 0; b < c; ++b) {
    for (const auto& row : block) {
      auto r = row;
      r.push_back(gap.prob(b, 0));
      probs.push_back(std::move(r));
      costs.push_back(gap.cost(b));
    }
  }
  std::vector<double> last(m, 0.5);
  last.push_back(gap.prob(c - 1, 0));
  probs.push_back(std::move(last));
  costs.push_back(gap.cost(c - 1));
  std::vector<double> rewards(m, 0.0);
  rewards.push_back(gap.reward(0));
  return ProductSetting(std::move(costs), std::move(rewards), std::move(probs));
}

ProductSetting gen_product2(const CNF& formula, double epsilon) {
  // Only the first gap action feeds the SAT rows; the second is the last row.
  const ProductSetting gap = gen_gap(2, epsilon);
  const auto block = sat_rows(formula);
  const std::size_t m = formula.num_vars;
  std::vector<std::vector<double>> probs;
  std::vector<double> costs;
  for (const auto& row : block) {
    auto r = row;
    r.push_back(gap.prob(0, 0));
    probs.push_back(std::move(r));
    costs.push_back(gap.cost(0));
  }
  std::vector<double> last(m, 0.5);
  last.push_back(gap.prob(1, 0));
  probs.push_back(std::move(last));
  costs.push_back(gap.cost(1));
  std::vector<double> rewards(m, 0.0);
  rewards.push_back(gap.reward(0));
  return ProductSetting(std::move(costs), std::move(rewards), std::move(probs));
}

SparseContract satisfying_contract(const ProductSetting& product, std::uint64_t assignment) {
  const std::size_t m = product.num_items() - 1;
  const std::uint64_t sat_part = assignment & ((std::uint64_t{1} << m) - 1);
  const Outcome star = Outcome(sat_part).with(m);
  const double pay = product.cost(product.num_actions() - 1) * std::ldexp(1.0, static_cast<int>(m));
  return make_sparse(0.0, {{star, pay}});
}

MinMaxInstance gen_minmax(const std::vector<long long>& a) {
  if (a.empty()) throw ArgumentError("minmax instance needs at least one integer");
  for (long long x : a) {
    if (x < 3) throw ArgumentError("minmax integers must be >= 3");
  }
  const std::size_t m = a.size();
  MinMaxInstance inst;
  const long long amax = *std::max_element(a.begin(), a.end());
  std::vector<double> q1(m), q2(m), q3(m, 0.5);
  double log_prod = 0.0;
  inst.ell = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    q1[j] = 1.0 / (static_cast<double>(a[j]) + 1.0);
    q2[j] = 1.0 - q1[j];
    inst.ell *= q1[j];
    log_prod += std::log(static_cast<double>(a[j]));
  }
  q3[0] = 1.0;
  inst.A = std::exp(0.5 * log_prod);
  inst.Delta = 1.0 - inst.ell * inst.A * std::ldexp(1.0, static_cast<int>(m) - 1);
  if (!(inst.Delta > 0.0)) throw ArgumentError("minmax instance has Delta <= 0");
  inst.reward = 2.0 / inst.Delta;
  inst.cost = 1.0 / (static_cast<double>(amax) + 1.0);
  std::vector<double> rewards(m, 0.0);
  rewards[0] = inst.reward;
  inst.setting = ProductSetting({0.0, 0.0, inst.cost}, std::move(rewards), {q1, q2, q3});
  return inst;
}

A3Instance gen_appendixA3(double epsilon, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw ArgumentError("delta must lie in (0, 1/2]");
  if (!(epsilon > 0.0 && std::isfinite(epsilon))) throw ArgumentError("epsilon must be > 0");
  A3Instance inst;
  const double e = epsilon, M = epsilon / delta;
  inst.M = M;
  inst.setting = ProductSetting({0.0, M - M * e / (2.0 * (M + e))}, {4.0 * e / 3.0, M + e},
                                {{0.25, 2.0 * e / (3.0 * (M + e))}, {0.0, 1.0}});
  inst.opt = e;
  inst.delta_payoff = 4.0 * e / 3.0;
  inst.delta_contract = make_sparse(0.0, {{Outcome(2), M - e / 3.0}});
  return inst;
}

FInstance gen_appendixF(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0,1)");
  const double d = delta;
  FInstance inst;
  const double r1 = (1.0 - (1.0 - d / 2.0) * d) / (d / 2.0);
  const double c2 = (1.0 - d) * (1.0 / d - 2.0 + d);
  inst.setting = ProductSetting({0.0, c2}, {r1, d}, {{d / 2.0, 1.0 - d / 2.0}, {0.5, 0.5}});
  inst.R1 = 1.0;
  inst.R2 = 1.0 / d - 1.0 + d;
  inst.opt = inst.R2 - c2 / (1.0 - d * d);
  inst.separable = 1.0;
  inst.opt_contract = make_sparse(0.0, {{Outcome(1), 4.0 * c2 / (1.0 - d * d)}});
  return inst;
}

double appendixF_delta_for_ratio(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in (0,1)");
  return (3.0 - eps - std::sqrt(eps * eps - 10.0 * eps + 9.0)) / 2.0;
}

namespace {

ProductSetting random_product(std::size_t n, std::size_t m, std::uint64_t seed, double lo, double hi) {
  if (n < 1 || m < 1) throw ArgumentError("random setting needs n, m >= 1");
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw ArgumentError("probability range must satisfy 0 <= lo <= hi <= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> probs(n, std::vector<double>(m));
  for (auto& row : probs) {
    for (double& q : row) q = lo + (hi - lo) * uniform01(rng);
  }
  std::vector<double> rewards(m);
  for (double& r : rewards) r = uniform01(rng);
  double top = 0.0;
  for (const auto& row : probs) {
    double R = 0.0;
    for (std::size_t j = 0; j < m; ++j) R += row[j] * rewards[j];
    top = std::max(top, R);
  }
  if (top > 0.0) {
    for (double& r : rewards) r /= top;
  }
  std::vector<double> costs(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double R = 0.0;
    for (std::size_t j = 0; j < m; ++j) R += probs[i][j] * rewards[j];
    costs[i] = uniform01(rng) * std::max(0.0, R - 0.01);
  }
  return ProductSetting(std::move(costs), std::move(rewards), std::move(probs));
}

}  // namespace

ProductSetting gen_random(std::size_t n, std::size_t m, std::uint64_t seed) {
  return random_product(n, m, seed, 0.0, 1.0);
}

ProductSetting gen_random(std::size_t n, std::size_t m, std::uint64_t seed, double lo, double hi) {
  return random_product(n, m, seed, lo, hi);
}

ExplicitSetting gen_random_explicit(std::size_t n, std::size_t k, std::uint64_t seed, double zero_fraction) {
  if (n < 1 || k < 1) throw ArgumentError("random setting needs n, K >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> dist(n, std::vector<double>(k));
  for (auto& row : dist) {
    double sum = 0.0;
    for (double& q : row) {
      q = uniform01(rng) < zero_fraction ? 0.0 : uniform01(rng) + 1e-3;
      sum += q;
    }
    if (sum == 0.0) {
      row[static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k))] = 1.0;
      sum = 1.0;
    }
    for (double& q : row) q /= sum;
  }
  std::vector<double> rewards(k);
  for (double& r : rewards) r = uniform01(rng);
  double top = 0.0;
  for (const auto& row : dist) {
    double R = 0.0;
    for (std::size_t s = 0; s < k; ++s) R += row[s] * rewards[s];
    top = std::max(top, R);
  }
  if (top > 0.0) {
    for (double& r : rewards) r /= top;
  }
  std::vector<double> costs(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double R = 0.0;
    for (std::size_t s = 0; s < k; ++s) R += dist[i][s] * rewards[s];
    costs[i] = uniform01(rng) * std::max(0.0, R - 0.01);
  }
  return ExplicitSetting(std::move(costs), std::move(rewards), std::move(dist));
}

SeparationInstance gen_random_separation(std::size_t n, std::size_t m, std::uint64_t seed, double lo,
                                         double hi) {
  if (n < 2 || m < 1) throw ArgumentError("separation instance needs n >= 2 and m >= 1");
  std::mt19937_64 rng(seed);
  SeparationInstance inst;
  double total = 0.0;
  inst.weights.resize(n - 1);
  for (double& w : inst.weights) {
    w = uniform01(rng) + 1e-3;
    total += w;
  }
  for (double& w : inst.weights) w /= total;
  auto draw = [&] {
    std::vector<double> row(m);
    for (double& q : row) q = lo + (hi - lo) * uniform01(rng);
    return row;
  };
  for (std::size_t k = 0; k + 1 < n; ++k) inst.mixtures.push_back(draw());
  inst.reference = draw();
  return inst;
}

namespace {

struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf, 8);
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    u64(v);
  }
};

}  // namespace

std::uint64_t digest(const ProductSetting& setting) {
  Fnv f;
  f.u64(setting.num_actions());
  f.u64(setting.num_items());
  for (double c : setting.costs()) f.f64(c);
  for (double r : setting.rewards()) f.f64(r);
  for (const auto& row : setting.probs()) {
    for (double q : row) f.f64(q);
  }
  return f.h;
}

std::string digest_hex(const ProductSetting& setting) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest(setting)));
  return buf;
}

}  // namespace cforge

#include <doctest.h>

#include <cmath>

#include "cforge/delta_solver.hpp"
#include "cforge/exact.hpp"
#include "cforge/generators.hpp"
#include "cforge/oracle.hpp"
#include "support/oracles.hpp"

using namespace cforge;

namespace {

// Two actions: the IC optimum pays only on the outcome with the largest
// likelihood ratio q_1S / q_0S.
double two_action_closed_form(const ProductSetting& p) {
  const auto t = oracle::product_table(p);
  double best = 0.0;
  for (std::size_t s = 0; s < t[1].size(); ++s) {
    if (t[1][s] <= 0.0) continue;
    const double gain = t[1][s] - t[0][s];
    if (gain <= 0.0) continue;
    // payment x on S: x (q_1S - q_0S) = c_1 - c_0, expected q_1S x
    const double cost = t[1][s] * (p.cost(1) - p.cost(0)) / gain;
    if (best == 0.0 || cost < best) best = cost;
  }
  return p.cost(1) <= p.cost(0) ? 0.0 : best;
}

}  // namespace

TEST_CASE("two actions: payment within the closed form") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const ProductSetting p = gen_random(2, 5, seed);
    const double closed = two_action_closed_form(p);
    const DeltaSolveResult r = min_payment_delta(p, 1, 0.1);
    CHECK(r.expected_payment <= closed + r.eps_search + 1e-9);
    CHECK(verify_delta_ic(p, r.contract, 1, 0.1, ICNotion::Multiplicative));
  }
}

TEST_CASE("gap setting target action") {
  const ProductSetting gap = gen_gap(2, 0.1);
  const DeltaSolveResult r = min_payment_delta(gap, 1, 0.01);
  CHECK(r.expected_payment <= 9.0 + 1e-6);
  CHECK(verify_delta_ic(gap, r.contract, 1, 0.01, ICNotion::Multiplicative));
  const OptContractResult o = opt_contract_delta(gap, 0.01);
  CHECK(o.payoff >= 1.0 - 1e-5);
}

TEST_CASE("four-thirds instance gains a third") {
  const A3Instance a3 = gen_appendixA3(0.3, 0.5);
  const OptContractResult o = opt_contract_delta(a3.setting, 0.5);
  CHECK(o.payoff >= 0.4 - 1e-5);
  CHECK(verify_delta_ic(a3.setting, o.contract, o.action, 0.5, ICNotion::Multiplicative));
}

TEST_CASE("single action returns the zero contract") {
  const ProductSetting one({0.0}, {0.5, 0.5}, {{0.4, 0.6}});
  const OptContractResult o = opt_contract_delta(one, 0.1);
  CHECK(o.payoff == doctest::Approx(0.5));
  CHECK(std::get<SparseContract>(o.contract) == SparseContract{});
}

TEST_CASE("random instances: within the IC optimum, support inside the cut pool") {
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    const ProductSetting p = gen_random(3, 6, seed);
    for (std::size_t i = 0; i < 3; ++i) {
      const DeltaSolveResult r = min_payment_delta(p, i, 0.1);
      const double ref = oracle::min_payment(p, i);
      CHECK(r.expected_payment <= ref + 1e-6 * std::max(1.0, p.expected_reward(i)) + 1e-9);
      CHECK(verify_delta_ic(p, r.contract, i, 0.1, ICNotion::Multiplicative));
      for (const auto& [s, pay] : r.contract.payments) {
        CHECK(std::find(r.cut_outcomes.begin(), r.cut_outcomes.end(), s) != r.cut_outcomes.end());
      }
      // payment bound from the binary search threshold
      CHECK(r.expected_payment <= (r.gamma_star + r.eps_search) / 1.1 + 1e-9 + r.base_lift);
    }
  }
}

TEST_CASE("accepted multipliers are feasible for the unrelaxed dual") {
  const double delta = 0.1;
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    const ProductSetting p = gen_random(3, 7, seed);
    const auto table = oracle::product_table(p);
    for (std::size_t i = 0; i < 3; ++i) {
      const DeltaSolveResult r = min_payment_delta(p, i, delta);
      for (const auto& lambda : r.accepted_duals) {
        double L = 0.0;
        for (double x : lambda) L += x;
        for (std::size_t s = 0; s < table[i].size(); ++s) {
          if (table[i][s] <= 0.0) continue;
          double mix = 0.0;
          std::size_t idx = 0;
          for (std::size_t k = 0; k < 3; ++k) {
            if (k == i) continue;
            mix += lambda[idx++] * table[k][s];
          }
          const double ratio = mix / table[i][s];
          // relaxed row as seen by the oracle, and the original row
          CHECK(L - 1.0 <= (1.0 + delta) * ratio + 1e-7 * std::max(1.0, L));
          CHECK(L - 1.0 <= ratio * (1.0 + delta) * (1.0 + delta) + 1e-7 * std::max(1.0, L));
        }
      }
    }
  }
}

TEST_CASE("trace reports every decision") {
  const ProductSetting p = gen_random(3, 5, 77);
  DeltaOptions opt;
  std::size_t rows = 0, feasible = 0;
  opt.trace = [&](const TraceRow& row) {
    ++rows;
    feasible += row.event == "feasible";
  };
  const DeltaSolveResult r = min_payment_delta(p, 2, 0.2, opt);
  CHECK(rows > 0);
  CHECK(feasible == r.accepted_duals.size());
}

TEST_CASE("ellipsoid method reaches the same guarantee") {
  for (std::uint64_t seed = 80; seed < 84; ++seed) {
    const ProductSetting p = gen_random(3, 5, seed);
    DeltaOptions opt;
    opt.method = DeltaMethod::Ellipsoid;
    for (std::size_t i = 0; i < 3; ++i) {
      const DeltaSolveResult r = min_payment_delta(p, i, 0.1, opt);
      CHECK(r.expected_payment <= oracle::min_payment(p, i) + 1e-6 * std::max(1.0, p.expected_reward(i)) + 1e-9);
      CHECK(verify_delta_ic(p, r.contract, i, 0.1, ICNotion::Multiplicative));
    }
  }
}

TEST_CASE("argument checks") {
  const ProductSetting p = gen_random(3, 3, 1);
  CHECK_THROWS_AS(min_payment_delta(p, 0, 0.0), ArgumentError);
  CHECK_THROWS_AS(min_payment_delta(p, 5, 0.1), ArgumentError);
  CHECK_THROWS_AS(min_payment_delta(gen_random(7, 2, 1), 0, 0.1), CapacityError);
  CHECK_THROWS_AS(parse_method("simplex"), ArgumentError);
}

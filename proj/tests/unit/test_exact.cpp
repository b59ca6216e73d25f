#include <doctest.h>

#include <cmath>

#include "cforge/exact.hpp"
#include "cforge/generators.hpp"
#include "support/oracles.hpp"

using namespace cforge;

TEST_CASE("single action needs no payment") {
  const ProductSetting one({0.0}, {1.0}, {{0.4}});
  const MinPaymentResult r = min_payment(one, 0);
  CHECK(r.status == Implementability::Implementable);
  CHECK(r.expected_payment == 0.0);
  CHECK(r.contract.payments.empty());
}

TEST_CASE("gap setting fixtures") {
  const ProductSetting gap = gen_gap(2, 0.1);
  const MinPaymentResult r = min_payment(gap, 1);
  CHECK(r.expected_payment == doctest::Approx(9.0));
  const OptContractResult opt = opt_contract(gap);
  CHECK(opt.payoff == doctest::Approx(1.0));
  CHECK(opt.action == 0);
  CHECK(first_best(gap) == doctest::Approx(1.9));
  for (int c = 2; c <= 5; ++c) {
    CHECK(first_best(gen_gap(c, 0.2)) == doctest::Approx(c - (c - 1) * 0.2));
  }
  CHECK(first_best(ProductSetting({0.0, 0.0}, {0.0}, {{0.1}, {0.7}})) == 0.0);
}

TEST_CASE("separable gap instance min payment") {
  for (double d : {0.2, 0.5, 0.8}) {
    const FInstance f = gen_appendixF(d);
    const MinPaymentResult r = min_payment(f.setting, 1);
    CHECK(r.expected_payment == doctest::Approx(f.setting.cost(1) / (1.0 - d * d)).epsilon(1e-9));
  }
}

TEST_CASE("four-thirds optimum and its delta relaxation") {
  const A3Instance a3 = gen_appendixA3(0.3, 0.5);
  CHECK(opt_contract(a3.setting).payoff == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(opt_contract(a3.setting, 0.5, ICNotion::Multiplicative).payoff >= 0.4 - 1e-9);
}

TEST_CASE("min payment matches vertex enumeration") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 2 + seed % 3, k = 3 + seed % 9;
    const ExplicitSetting e = gen_random_explicit(n, k, seed, seed % 2 ? 0.3 : 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto [delta, mult] : {std::pair{0.0, true}, std::pair{0.2, true}, std::pair{0.1, false}}) {
        const MinPaymentResult r = min_payment(e, i, delta, mult ? ICNotion::Multiplicative : ICNotion::Additive);
        const double ref = oracle::min_payment(e, i, delta, mult);
        if (std::isinf(ref)) {
          CHECK(r.status == Implementability::NotImplementable);
          CHECK(std::isinf(r.expected_payment));
          continue;
        }
        REQUIRE(r.status == Implementability::Implementable);
        CHECK(r.expected_payment == doctest::Approx(ref).epsilon(1e-7));
        CHECK(verify_delta_ic(e, r.contract, i, delta, mult ? ICNotion::Multiplicative : ICNotion::Additive));
        CHECK(r.contract.payments.size() <= n - 1);
      }
    }
  }
}

TEST_CASE("payments only shrink as delta grows") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const ExplicitSetting e = gen_random_explicit(3, 8, seed);
    for (std::size_t i = 0; i < 3; ++i) {
      double prev = INFINITY;
      for (double d : {0.0, 0.05, 0.1, 0.3, 1.0}) {
        const double p = min_payment(e, i, d).expected_payment;
        CHECK(p <= prev + 1e-9);
        prev = p;
      }
    }
  }
}

TEST_CASE("every action is implementable once delta > 0") {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const ExplicitSetting e = gen_random_explicit(4, 6, seed, 0.3);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(min_payment(e, i, 0.01).status == Implementability::Implementable);
    }
  }
}

TEST_CASE("optimum beats the zero contract") {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    const ProductSetting p = gen_random(4, 4, seed);
    const OptContractResult r = opt_contract(p);
    CHECK(r.payoff >= best_response(p, SparseContract{}).principal_payoff - 1e-9);
    CHECK(r.payoff == doctest::Approx(oracle::opt_payoff(p)).epsilon(1e-7));
    double top = -INFINITY;
    for (double x : r.action_payoffs) top = std::max(top, x);
    CHECK(r.payoff == doctest::Approx(top));
  }
}

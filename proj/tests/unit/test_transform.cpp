#include <doctest.h>

#include <cmath>

#include "cforge/exact.hpp"
#include "cforge/generators.hpp"
#include "cforge/transform.hpp"
#include "support/corpus.hpp"

using namespace cforge;

TEST_CASE("delta zero leaves the contract alone") {
  const ProductSetting p = gen_random(3, 4, 5);
  const Contract c = LinearContract{0.3};
  const ToICResult r = delta_to_ic(p, c, 0.0);
  CHECK(std::get<LinearContract>(r.contract).alpha == 0.3);
  CHECK(r.bound == doctest::Approx(r.source_payoff));
  CHECK(r.bound_holds);
}

TEST_CASE("four-thirds contract") {
  const A3Instance a3 = gen_appendixA3(0.3, 0.5);
  const ToICResult r = delta_to_ic(a3.setting, a3.delta_contract, 0.5);
  CHECK(r.source_payoff == doctest::Approx(0.4));
  CHECK(r.bound == doctest::Approx((1.0 - std::sqrt(0.5)) * 0.4 - (std::sqrt(0.5) - 0.5)));
  CHECK(r.bound < -0.08);
  CHECK(r.bound_holds);
}

TEST_CASE("interpolated contract is IC and meets the bound") {
  for (const auto& c : corpus::delta_ic_cases(120, 11)) {
    const ToICResult r = delta_to_ic(c.setting, c.contract, c.delta);
    CHECK(r.bound_holds);
    CHECK(verify_delta_ic(c.setting, r.contract, r.realized.action, 0.0, ICNotion::Additive));
    CHECK(r.realized.principal_payoff >=
          (1.0 - std::sqrt(c.delta)) * r.source_payoff - (std::sqrt(c.delta) - c.delta) - 1e-9);
    // payment at the source action: (1 - sqrt d) p_i + sqrt d R_i
    const double before = expected_payment(c.setting, r.source_action, c.contract);
    const double after = expected_payment(c.setting, r.source_action, r.contract);
    const double root = std::sqrt(c.delta);
    CHECK(after == doctest::Approx((1.0 - root) * before + root * expected_rewards(c.setting)[r.source_action]));
  }
}

TEST_CASE("interpolation argument checks") {
  const ProductSetting p = gen_random(3, 4, 5);
  CHECK_THROWS_AS(delta_to_ic(p, LinearContract{0.2}, 1.0), ArgumentError);
  CHECK_THROWS_AS(delta_to_ic(p, LinearContract{0.2}, -0.1), ArgumentError);
  CHECK_THROWS_AS(delta_to_ic(gen_gap(2, 0.1), LinearContract{0.2}, 0.1), ArgumentError);
}

TEST_CASE("uniform lift") {
  for (const auto& c : corpus::delta_ic_cases(120, 23)) {
    const ToIRResult r = delta_to_ir(c.setting, c.contract, c.delta);
    CHECK(r.realized.agent_utility >= -1e-9);
    CHECK(r.realized.principal_payoff >= r.source_payoff - c.delta - 1e-9);
    CHECK(verify_delta_ic(c.setting, r.contract, r.realized.action, c.delta, ICNotion::Additive));
    if (r.lifted) {
      const double before = expected_payment(c.setting, r.source_action, c.contract);
      const double after = expected_payment(c.setting, r.source_action, r.contract);
      CHECK(after == doctest::Approx(before + c.delta));
    } else {
      CHECK(r.source_payoff <= c.delta);
    }
  }
}

TEST_CASE("lift below delta falls back to zero payments") {
  // both actions earn at most 0.05 for the principal under this contract
  const ProductSetting p({0.0, 0.0}, {0.05}, {{0.5}, {1.0}});
  const ToIRResult r = delta_to_ir(p, LinearContract{0.0}, 0.1);
  CHECK_FALSE(r.lifted);
  CHECK(std::get<SparseContract>(r.contract) == SparseContract{});
  CHECK(r.realized.principal_payoff == doctest::Approx(0.05));

  const ProductSetting q({0.0, 0.1}, {1.0}, {{0.2}, {0.9}});
  const SparseContract s = make_sparse(0.0, {{Outcome(1), 0.1}});
  const ToIRResult l = delta_to_ir(q, s, 0.1);
  REQUIRE(l.lifted);
  CHECK(std::get<SparseContract>(l.contract).base == doctest::Approx(0.1));
  CHECK(l.realized.principal_payoff == doctest::Approx(l.source_payoff - 0.1));
}

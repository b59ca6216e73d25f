#include <doctest.h>

#include <cmath>

#include "cforge/blackbox.hpp"
#include "cforge/exact.hpp"
#include "cforge/generators.hpp"

using namespace cforge;

namespace {

ExplicitSetting eta_two() {
  return ExplicitSetting({0.0, 0.1}, {0.0, 0.5, 1.0}, {{0.2, 0.8, 0.0}, {0.5, 0.3, 0.2}});
}

}  // namespace

TEST_CASE("sample count formula") {
  CHECK(required_samples(2, 0.05, 0.1, 0.1) == 40108);
  CHECK(required_samples(1, 1.0, 0.5, 0.5) == 17);
  for (std::size_t n : {1u, 3u, 10u}) {
    const double a = 3.0 * std::log(2.0 * n / (0.2 * 0.1)) / (0.2 * 0.01);
    const double b = 3.0 * std::log(4.0 * n / (0.2 * 0.1)) / (0.2 * 0.01);
    CHECK(b - a == doctest::Approx(3.0 * std::log(2.0) / (0.2 * 0.01)));
    CHECK(required_samples(n, 0.2, 0.1, 0.1) == static_cast<std::size_t>(std::ceil(a)));
  }
  CHECK_THROWS_AS(required_samples(2, 0.0, 0.1, 0.1), ArgumentError);
  CHECK_THROWS_AS(required_samples(2, 0.1, 0.6, 0.1), ArgumentError);
  CHECK_THROWS_AS(required_samples(2, 0.1, 0.1, 1.0), ArgumentError);
}

TEST_CASE("point masses are recovered exactly") {
  const ExplicitSetting e({0.0, 0.3}, {0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}});
  QueryOracle oracle(e, 9);
  const EmpiricalModel m = estimate(oracle, 5);
  CHECK(m.tilde_q(0, Outcome(0)) == 1.0);
  CHECK(m.tilde_q(1, Outcome(1)) == 1.0);
  CHECK(within_relative_error(e, m, 0.0));

  QueryOracle again(e, 10);
  const BlackBoxResult r = blackbox_contract(again, 0.1, 0.1);
  CHECK(r.eta == 1.0);
  // the empirical program is solved with additive slack 2 eps
  CHECK(r.payoff_on_true == doctest::Approx(opt_contract(e, 0.2, ICNotion::Additive).payoff));
  CHECK(r.payoff_on_true == doctest::Approx(0.9));
  CHECK(r.opt == doctest::Approx(0.7));
}

TEST_CASE("estimation is reproducible and never invents outcomes") {
  const ExplicitSetting e = eta_two();
  QueryOracle a(e, 123), b(e, 123);
  const EmpiricalModel ma = estimate(a, 500), mb = estimate(b, 500);
  CHECK(ma.outcomes == mb.outcomes);
  CHECK(ma.counts == mb.counts);
  CHECK(ma.tilde_q(0, Outcome(2)) == 0.0);
  CHECK(a.queries() == 1000);
  for (std::size_t i = 0; i < 2; ++i) {
    double total = 0.0;
    for (auto s : ma.outcomes) total += ma.tilde_q(i, s);
    CHECK(total == doctest::Approx(1.0));
  }

  const ProductSetting p({0.0, 0.1}, {0.5, 0.5}, {{0.0, 0.4}, {1.0, 0.3}});
  QueryOracle po(p, 4);
  const EmpiricalModel pm = estimate(po, 400);
  for (auto s : pm.outcomes) {
    CHECK(pm.tilde_q(0, s) * (s.contains(0) ? 1.0 : 0.0) == 0.0);
    CHECK(pm.tilde_q(1, s) * (s.contains(0) ? 0.0 : 1.0) == 0.0);
  }
}

TEST_CASE("relative error event has the promised frequency") {
  const ExplicitSetting e = eta_two();
  const std::size_t s = required_samples(2, 0.2, 0.2, 0.1);
  int good = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    QueryOracle oracle(e, trial_seed(77, t));
    good += within_relative_error(e, estimate(oracle, s), 0.2);
  }
  CHECK(good >= 180);
}

TEST_CASE("black-box contract on a 2-action instance") {
  const ExplicitSetting e = eta_two();
  int ok = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    QueryOracle oracle(e, trial_seed(5, t));
    const BlackBoxResult r = blackbox_contract(oracle, 0.1, 0.1);
    CHECK(r.claimed_delta == doctest::Approx(0.4));
    CHECK(r.opt == doctest::Approx(opt_contract(e).payoff));
    if (r.event_holds) {
      CHECK(r.ic_slack >= -0.4 - 1e-9);
      CHECK(r.payoff_on_true >= r.payoff_bound - 1e-9);
      CHECK(r.true_opt_slack_on_empirical >= -0.2 - 1e-9);
      CHECK(r.payoff_gap >= -0.2 - 1e-9);
      CHECK(r.payment_gap >= -0.3 - 1e-9);
      ++ok;
    }
  }
  CHECK(ok >= 4);
  const ProductSetting big = gen_gap(2, 0.1);
  QueryOracle oracle(big, 1);
  CHECK_THROWS_AS(blackbox_contract(oracle, 0.1, 0.1), ArgumentError);
}

TEST_CASE("negative pair analytics") {
  const NegativePair pair = negative_pair(1.0 / 1000.0);
  const double tau = 1.0 + std::sqrt(2.0);
  CHECK(pair.tau == doctest::Approx(tau));
  CHECK(pair.mu == doctest::Approx(std::sqrt(1e-3) / tau));
  CHECK(pair.beta == doctest::Approx(1.0 / (1.0 + 1.0 / (tau * tau))));
  for (const ProductSetting* s : {&pair.first, &pair.second}) {
    CHECK(s->expected_reward(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s->expected_reward(0) == doctest::Approx(2.0 * pair.beta / tau));
    CHECK(min_positive_probability(*s) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(opt_contract(*s).payoff == doctest::Approx(pair.beta).epsilon(1e-9));
  }
  CHECK(pair.first.prob(1, 0) == pair.second.prob(1, 1));
  CHECK(pair.query_lower_bound(0.1) == doctest::Approx(-std::log(0.1) / (9.0 * std::sqrt(1e-3))));
  CHECK(pair.observation_probability(0) == 0.0);
  CHECK_THROWS_AS(negative_pair(0.01), ArgumentError);

  const ObservationExperiment x = observe_negative_pair(pair, 20, 2000, 3);
  CHECK(x.predicted == doctest::Approx(pair.observation_probability(20)));
  CHECK(std::abs(x.frequency - x.predicted) <= 3.0 * x.standard_error);
}

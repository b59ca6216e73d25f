#include <doctest.h>

#include <cmath>

#include "cforge/exact.hpp"
#include "cforge/generators.hpp"
#include "cforge/linear.hpp"
#include "support/oracles.hpp"

using namespace cforge;

TEST_CASE("envelope of a single action") {
  const ProductSetting one({0.0}, {1.0}, {{0.3}});
  const Envelope env = upper_envelope(one);
  REQUIRE(env.segments.size() == 1);
  CHECK(env.segments[0].left == 0.0);
  CHECK(env.segments[0].right == 1.0);
}

TEST_CASE("envelope of the gap settings") {
  const Envelope two = upper_envelope(gen_gap(2, 0.1));
  REQUIRE(two.segments.size() == 2);
  CHECK(two.segments[0].action == 0);
  CHECK(two.segments[1].action == 1);
  CHECK(two.segments[1].left == doctest::Approx(0.9));
  CHECK(two.locate(0.9) == 1);
  CHECK(two.locate(0.5) == 0);

  const ProductSetting g3 = gen_gap(3, 0.1);
  const Envelope three = upper_envelope(g3);
  REQUIRE(three.segments.size() == 3);
  CHECK(three.segments.back().action == 2);
  CHECK(three.segments.back().right == 1.0);
  // lines 0.01 a R, 0.1 a R - c_2, a R - c_3 with R = 100
  CHECK(three.segments[1].left == doctest::Approx(g3.cost(1) / 9.0));
  CHECK(three.segments[2].left == doctest::Approx((g3.cost(2) - g3.cost(1)) / 90.0));
}

TEST_CASE("envelope invariants on random instances") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const ProductSetting p = gen_random(2 + seed % 7, 4, seed);
    const Envelope env = upper_envelope(p);
    const auto& r = p.expected_rewards();
    REQUIRE(!env.segments.empty());
    CHECK(env.segments.front().left == 0.0);
    CHECK(env.segments.back().right == 1.0);
    for (std::size_t s = 1; s < env.segments.size(); ++s) {
      const auto a = env.segments[s - 1].action, b = env.segments[s].action;
      CHECK(env.segments[s - 1].right == env.segments[s].left);
      CHECK(r[a] <= r[b]);
      CHECK(p.cost(a) <= p.cost(b));
      CHECK(r[a] - p.cost(a) <= r[b] - p.cost(b) + 1e-12);
    }
    CHECK(r[env.segments.back().action] - p.cost(env.segments.back().action) ==
          doctest::Approx(first_best(p)));
    // each segment's action is a best response in the middle of its interval
    for (const auto& seg : env.segments) {
      const double mid = 0.5 * (seg.left + seg.right);
      for (std::size_t k = 0; k < r.size(); ++k) {
        CHECK(mid * r[seg.action] - p.cost(seg.action) >= mid * r[k] - p.cost(k) - 1e-12);
      }
    }
  }
}

TEST_CASE("optimal linear contract") {
  const LinearChoice gap = optimal_linear(gen_gap(2, 0.1));
  CHECK(gap.payoff == doctest::Approx(1.0));

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const ProductSetting p = gen_random(2 + seed % 6, 5, seed);
    const LinearChoice lin = optimal_linear(p);
    CHECK(lin.payoff == doctest::Approx(oracle::linear_opt_payoff(p.expected_rewards(), p.costs())));
    double scan = -1.0;
    for (const auto& seg : upper_envelope(p).segments) {
      scan = std::max(scan, (1.0 - seg.left) * p.expected_reward(seg.action));
    }
    CHECK(lin.payoff == doctest::Approx(scan));
    CHECK(verify_delta_ic(p, LinearContract{lin.alpha}, lin.action, 0.0, ICNotion::Additive));
    // small delta can only help
    CHECK(optimal_linear(p, 0.05).payoff >= lin.payoff - 1e-12);
  }
}

TEST_CASE("delta one makes every action incentivizable at zero") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ProductSetting p = gen_random(4, 3, seed);
    const LinearChoice lin = optimal_linear(p, 1.0);
    CHECK(lin.alpha == 0.0);
    double best = 0.0;
    for (double r : p.expected_rewards()) best = std::max(best, r);
    CHECK(lin.payoff == doctest::Approx(best));
  }
}

TEST_CASE("separable contracts") {
  const FInstance f = gen_appendixF(0.5);
  const SeparableChoice sep = optimal_separable(f.setting);
  CHECK(sep.payoff == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(optimal_linear(f.setting).payoff <= 1.0 + 1e-9);

  const ProductSetting free({0.0, 0.0}, {0.3, 0.6}, {{0.5, 0.5}, {0.9, 0.8}});
  const SeparableChoice z = optimal_separable(free);
  CHECK(z.payoff == doctest::Approx(free.expected_reward(1)));
  for (double x : z.item_payments) CHECK(x == 0.0);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ProductSetting p = gen_random(3, 6, seed);
    const SeparableChoice s = optimal_separable(p);
    CHECK(s.payoff >= optimal_linear(p).payoff - 1e-9);
    CHECK(verify_delta_ic(p, SeparableContract{s.item_payments}, s.action, 0.0, ICNotion::Additive));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ProductSetting p = gen_random(3, 3, seed);
    CHECK(optimal_separable(p).payoff == doctest::Approx(oracle::separable_opt_payoff(p)).epsilon(1e-7));
  }
}

TEST_CASE("geometric intervals on the gap setting") {
  const ProductSetting gap = gen_gap(2, 0.1);
  const LinearApproxResult r = approx_linear_delta(gap, 0.1, 0.5);
  CHECK(r.kappa == 8);
  CHECK(r.payoff >= 0.5 * 1.9 / 9.0 - 1e-12);
  CHECK(r.guarantee == doctest::Approx(0.5 * 1.9 / 9.0));
  CHECK(verify_delta_ic(gap, LinearContract{r.alpha}, r.action, 0.1, ICNotion::Additive));
}

TEST_CASE("single action approximation is exactly IC") {
  const ProductSetting one({0.0}, {1.0}, {{0.3}});
  const LinearApproxResult r = approx_linear_delta(one, 0.1, 0.5);
  CHECK(r.alpha == 0.0);
  CHECK(r.candidates.size() == 1);
  CHECK(r.payoff == doctest::Approx(0.3));
}

TEST_CASE("approximation guarantee, telescoping and candidate incentives") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const ProductSetting p = gen_random(2 + seed % 7, 4, seed);
    for (auto [delta, gamma] : {std::pair{0.1, 0.5}, std::pair{0.3, 0.2}, std::pair{0.05, 0.9}}) {
      const LinearApproxResult r = approx_linear_delta(p, delta, gamma);
      CHECK(r.payoff >= r.guarantee - 1e-12);
      CHECK(verify_delta_ic(p, LinearContract{r.alpha}, r.action, delta, ICNotion::Additive));
      CHECK(r.welfare <= r.telescoped + 1e-12);
      for (const auto& c : r.candidates) CHECK(c.delta_ic);
      CHECK(static_cast<int>(r.interval_left.size()) == r.kappa + 1);
    }
  }
}

TEST_CASE("welfare differences are bounded by the indifference payoff") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CHECK(welfare_gap_violations(gen_random(2 + seed % 7, 5, seed)).empty());
  }
}

TEST_CASE("duplicate rewards keep the cheaper action") {
  int warnings = 0;
  set_warning_sink([&](std::string_view) { ++warnings; });
  const ProductSetting dup({0.0, 0.2, 0.1}, {1.0}, {{0.1}, {0.6}, {0.6}});
  const Envelope env = upper_envelope(dup);
  set_warning_sink([](std::string_view) {});
  CHECK(warnings == 1);
  CHECK(env.shadowed == std::vector<std::size_t>{1});
  for (const auto& seg : env.segments) CHECK(seg.action != 1);
  CHECK_THROWS_AS(indifference_alpha(dup, 1, 2), ArgumentError);
  CHECK_THROWS_AS(approx_linear_delta(dup, 0.0, 0.5), ArgumentError);
  CHECK_THROWS_AS(approx_linear_delta(dup, 0.1, 1.0), ArgumentError);
}

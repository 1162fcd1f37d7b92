#include <cmath>
#include <random>

#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"
#include "cachegame/oracle.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cachegame;

TEST_CASE("provider revenue") {
  CHECK(cp_revenue(0.0, 5.0, 5.0) == 0.0);
  CHECK(cp_revenue(1.0, 0.0, 3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // log(1 + 2/(1 + 3/6)) = log(7/3)
  CHECK(cp_revenue(2.0, 3.0, 6.0) == doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-14));

  CHECK_THROWS_AS(cp_revenue(-0.1, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(cp_revenue(1.0, -0.1, 2.0), DomainError);
  CHECK_THROWS_AS(cp_revenue(1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("provider revenue is increasing in q and decreasing in congestion") {
  double previous = cp_revenue(0.0, 2.0, 5.0);
  for (double q = 0.5; q < 5.0; q += 0.5) {
    const double value = cp_revenue(q, 2.0, 5.0);
    CHECK(value > previous);
    previous = value;
  }
  CHECK(cp_revenue(2.0, 4.0, 5.0) < cp_revenue(2.0, 1.0, 5.0));
}

TEST_CASE("provider cost") {
  CHECK(cp_cost(0.3, 2.0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(cp_cost(0.0, 9.0) == 0.0);
  CHECK(cp_cost(1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(cp_cost(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(cp_cost(0.1, -1.0), DomainError);
}

TEST_CASE("provider utility composes revenue and cost") {
  CHECK(cp_utility(0.3, 0.0, 0.0, 5.0) == 0.0);
  CHECK(cp_utility(0.3, 1.0, 0.0, 5.0) ==
        doctest::Approx(std::log(2.0) - 0.3).epsilon(1e-14));
}

TEST_CASE("utility at the two-provider equilibrium point beats nearby deviations") {
  // Equilibrium of the worked two-provider scenario at price 0.3.
  const double q_1 = 98.0 / 51.0;
  const double j_1 = 35.0 / 17.0;
  const double at_ne = cp_utility(0.3, q_1, j_1, 5.0);
  CHECK(at_ne > cp_utility(0.3, q_1 + 0.1, j_1, 5.0));
  CHECK(at_ne > cp_utility(0.3, q_1 - 0.1, j_1, 5.0));
}

TEST_CASE("best response formula") {
  CHECK(best_response(1.0, 0.0, 5.0) == 0.0);
  CHECK(best_response(0.3, 0.0, 5.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  CHECK(best_response(0.3, 35.0 / 17.0, 5.0) ==
        doctest::Approx(98.0 / 51.0).epsilon(1e-14));
  // Saturated at zero once the competitors crowd the provider out.
  CHECK(best_response(0.5, 100.0, 2.0) == 0.0);
  CHECK_THROWS_AS(best_response(0.0, 0.0, 5.0), DomainError);
  CHECK_THROWS_AS(best_response(-0.3, 0.0, 5.0), DomainError);
}

TEST_CASE("best response maximizes the utility") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> price_dist(0.05, 0.95);
  std::uniform_real_distribution<double> j_dist(0.0, 20.0);
  std::uniform_real_distribution<double> alpha_dist(1.5, 50.0);
  std::uniform_real_distribution<double> probe_dist(0.0, 25.0);

  for (int trial = 0; trial < 200; ++trial) {
    const double price = price_dist(rng);
    const double j_m = j_dist(rng);
    const double alpha = alpha_dist(rng);
    CAPTURE(trial);
    CAPTURE(price);
    CAPTURE(j_m);
    CAPTURE(alpha);

    const double br = best_response(price, j_m, alpha);
    const double numeric = numeric_best_response(price, j_m, alpha, 1.0 / price + 1.0);
    CHECK(std::abs(br - numeric) <= 1e-8);

    const double at_br = cp_utility(price, br, j_m, alpha);
    for (int probe = 0; probe < 10; ++probe) {
      const double q = probe_dist(rng);
      const double at_q = cp_utility(price, q, j_m, alpha);
      CHECK(at_br >= at_q - 1e-12);
      if (std::abs(q - br) > 1e-3) CHECK(at_br > at_q);
    }
  }
}

TEST_CASE("provider utility is concave in the request") {
  std::mt19937_64 rng(92);
  std::uniform_real_distribution<double> price_dist(0.05, 0.95);
  std::uniform_real_distribution<double> j_dist(0.0, 20.0);
  std::uniform_real_distribution<double> alpha_dist(1.5, 50.0);
  std::uniform_real_distribution<double> q_dist(0.01, 10.0);
  const double h = 1e-4;

  for (int trial = 0; trial < 500; ++trial) {
    const double price = price_dist(rng);
    const double j_m = j_dist(rng);
    const double alpha = alpha_dist(rng);
    const double q = q_dist(rng);
    CAPTURE(trial);
    const double second_difference = cp_utility(price, q - h, j_m, alpha) -
                                     2.0 * cp_utility(price, q, j_m, alpha) +
                                     cp_utility(price, q + h, j_m, alpha);
    CHECK(second_difference < 0.0);
  }
}

TEST_CASE("linear equilibrium of the two-provider scenario") {
  const MarketConfig config = testutil::two_cp_market();
  const NeSolution ne = solve_ne_linear(config, 0.3);
  REQUIRE(ne.profile.q.size() == 2);
  CHECK(ne.clamped.empty());
  CHECK(std::abs(ne.profile.q[0] - 98.0 / 51.0) <= 1e-12);
  CHECK(std::abs(ne.profile.q[1] - 35.0 / 17.0) <= 1e-12);
}

TEST_CASE("single provider requests 1/price - 1") {
  const MarketConfig config = testutil::make_market({5.0});
  const NeSolution ne = solve_ne_linear(config, 0.5);
  REQUIRE(ne.profile.q.size() == 1);
  CHECK(std::abs(ne.profile.q[0] - 1.0) <= 1e-14);
}

TEST_CASE("three-provider equilibrium matches the hand-solved system") {
  // alpha = [4,5,6], price 0.2: exact solution [268, 308, 332] / 107.
  const MarketConfig config = testutil::make_market({4.0, 5.0, 6.0});
  const NeSolution ne = solve_ne_linear(config, 0.2);
  REQUIRE(ne.profile.q.size() == 3);
  CHECK(std::abs(ne.profile.q[0] - 268.0 / 107.0) <= 1e-12);
  CHECK(std::abs(ne.profile.q[1] - 308.0 / 107.0) <= 1e-12);
  CHECK(std::abs(ne.profile.q[2] - 332.0 / 107.0) <= 1e-12);

  const double deviations[] = {-0.1, -0.01, 0.01, 0.1};
  const OracleVerdict verdict = verify_ne(config, 0.2, ne.profile, deviations);
  CHECK(verdict.passed);
}

TEST_CASE("equilibrium satisfies per-provider best-response consistency") {
  std::mt19937_64 rng(93);
  std::uniform_real_distribution<double> price_dist(0.05, 0.9);
  for (std::size_t m_count = 1; m_count <= 5; ++m_count) {
    for (int trial = 0; trial < 20; ++trial) {
      const MarketConfig config = testutil::random_market(rng, m_count);
      const double price = price_dist(rng);
      CAPTURE(m_count);
      CAPTURE(trial);
      CAPTURE(price);
      const NeSolution ne = solve_ne_linear(config, price);
      bool all_positive = true;
      for (double q : ne.profile.q) all_positive = all_positive && q > 0.0;
      if (!all_positive) continue;
      for (std::size_t m = 0; m < m_count; ++m) {
        const double expected =
            best_response(price, ne.profile.others_total(m), config.cps[m].alpha);
        CHECK(std::abs(ne.profile.q[m] - expected) <= 1e-9);
      }
    }
  }
}

TEST_CASE("no provider gains from unilateral deviations at the equilibrium") {
  std::mt19937_64 rng(98);
  std::uniform_real_distribution<double> price_dist(0.05, 0.9);
  for (std::size_t m_count = 2; m_count <= 5; ++m_count) {
    for (int trial = 0; trial < 10; ++trial) {
      const MarketConfig config = testutil::random_market(rng, m_count);
      const double price = price_dist(rng);
      const QuantityProfile profile = solve_ne_linear(config, price).profile;
      CAPTURE(m_count);
      CAPTURE(trial);
      CAPTURE(price);
      for (std::size_t m = 0; m < m_count; ++m) {
        const double j_m = profile.others_total(m);
        const double alpha = config.cps[m].alpha;
        const double at_ne = cp_utility(price, profile.q[m], j_m, alpha);
        // Both relative and absolute unilateral moves.
        for (double factor : {0.99, 1.01, 0.9, 1.1}) {
          const double gain =
              cp_utility(price, profile.q[m] * factor, j_m, alpha) - at_ne;
          CHECK(gain <= 1e-12);
        }
        for (double offset : {-0.1, 0.1}) {
          const double q_dev = std::max(0.0, profile.q[m] + offset);
          const double gain = cp_utility(price, q_dev, j_m, alpha) - at_ne;
          CHECK(gain <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("equilibrium quantities decrease in the price") {
  const MarketConfig config = testutil::two_cp_market();
  QuantityProfile previous = solve_ne_linear(config, 0.05).profile;
  for (double price = 0.1; price < 1.0; price += 0.05) {
    const QuantityProfile current = solve_ne_linear(config, price).profile;
    for (std::size_t m = 0; m < current.q.size(); ++m) CHECK(current.q[m] < previous.q[m]);
    previous = current;
  }
}

TEST_CASE("closed form matches the linear solve for two providers") {
  std::mt19937_64 rng(94);
  std::uniform_real_distribution<double> alpha_dist(2.0, 50.0);
  std::uniform_real_distribution<double> price_dist(0.01, 0.99);
  for (int trial = 0; trial < 500; ++trial) {
    const MarketConfig config =
        testutil::make_market({alpha_dist(rng), alpha_dist(rng)});
    const double price = price_dist(rng);
    CAPTURE(trial);
    CAPTURE(price);
    const QuantityProfile closed = ne_closed_form(config, price);
    const NeSolution linear = solve_ne_linear(config, price);
    for (std::size_t m = 0; m < 2; ++m) {
      const double rel = std::abs(closed.q[m] - linear.profile.q[m]) /
                         std::max(std::abs(linear.profile.q[m]), 1e-30);
      CHECK(rel <= 1e-12);
    }
  }
}

TEST_CASE("closed form collapses to the symmetric solution") {
  std::mt19937_64 rng(95);
  std::uniform_real_distribution<double> alpha_dist(2.0, 50.0);
  std::uniform_real_distribution<double> price_dist(0.01, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = alpha_dist(rng);
    const double price = price_dist(rng);
    const MarketConfig config = testutil::make_market({alpha, alpha});
    const QuantityProfile closed = ne_closed_form(config, price);
    const double expected = (1.0 / price - 1.0) * alpha / (alpha + 1.0);
    CHECK(std::abs(closed.q[0] - expected) <= 1e-12 * expected);
    CHECK(std::abs(closed.q[1] - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("closed form for a single provider") {
  const MarketConfig config = testutil::make_market({5.0});
  const QuantityProfile closed = ne_closed_form(config, 0.25);
  REQUIRE(closed.q.size() == 1);
  CHECK(std::abs(closed.q[0] - 3.0) <= 1e-14);
}

TEST_CASE("closed form rejects alpha equal to one") {
  MarketConfig config = testutil::make_market({5.0, 7.0});
  config.cps[1].alpha = 1.0;
  CHECK_THROWS_AS(ne_closed_form(config, 0.3), DomainError);
}

TEST_CASE("best-response dynamics reach the two-provider equilibrium") {
  const MarketConfig config = testutil::two_cp_market();
  QuantityProfile initial;
  initial.q = {0.0, 0.0};
  const BrTrace trace = br_dynamics(config, 0.3, initial);
  CHECK(trace.converged);
  CHECK(trace.steps() <= 100);
  CHECK(trace.final_residual <= 1e-9);
  const QuantityProfile& last = trace.iterations.back();
  CHECK(std::abs(last.q[0] - 98.0 / 51.0) <= 1e-9);
  CHECK(std::abs(last.q[1] - 35.0 / 17.0) <= 1e-9);
  CHECK(trace.iterations.front().q == initial.q);
}

TEST_CASE("dynamics started at the fixed point converge in one check") {
  const MarketConfig config = testutil::two_cp_market();
  const QuantityProfile fixed_point = solve_ne_linear(config, 0.3).profile;
  const BrTrace trace = br_dynamics(config, 0.3, fixed_point);
  CHECK(trace.converged);
  CHECK(trace.steps() == 1);
  CHECK(trace.final_residual <= 1e-12);
}

TEST_CASE("dynamics converge to the linear equilibrium from anywhere") {
  std::mt19937_64 rng(96);
  std::uniform_real_distribution<double> price_dist(0.05, 0.9);
  std::uniform_real_distribution<double> start_dist(0.0, 30.0);
  BrOptions options;
  options.tol = 1e-12;

  for (std::size_t m_count = 2; m_count <= 5; ++m_count) {
    for (int config_trial = 0; config_trial < 3; ++config_trial) {
      const MarketConfig config = testutil::random_market(rng, m_count);
      const double price = price_dist(rng);
      const QuantityProfile reference = solve_ne_linear(config, price).profile;
      CAPTURE(m_count);
      CAPTURE(config_trial);
      CAPTURE(price);
      for (int start = 0; start < 20; ++start) {
        QuantityProfile initial;
        for (std::size_t m = 0; m < m_count; ++m) initial.q.push_back(start_dist(rng));
        const BrTrace trace = br_dynamics(config, price, initial, options);
        REQUIRE(trace.converged);
        const QuantityProfile& last = trace.iterations.back();
        for (std::size_t m = 0; m < m_count; ++m)
          CHECK(std::abs(last.q[m] - reference.q[m]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("sequential updates land on the same fixed point") {
  const MarketConfig config = testutil::two_cp_market();
  QuantityProfile initial;
  initial.q = {0.0, 0.0};
  BrOptions options;
  options.schedule = UpdateSchedule::Sequential;
  const BrTrace trace = br_dynamics(config, 0.3, initial, options);
  CHECK(trace.converged);
  CHECK(std::abs(trace.iterations.back().q[0] - 98.0 / 51.0) <= 1e-8);
  CHECK(std::abs(trace.iterations.back().q[1] - 35.0 / 17.0) <= 1e-8);
}

TEST_CASE("non-convergence keeps the full trace") {
  const MarketConfig config = testutil::two_cp_market();
  QuantityProfile initial;
  initial.q = {0.0, 0.0};
  BrOptions options;
  options.tol = 1e-15;
  options.max_iter = 3;
  const BrTrace trace = br_dynamics(config, 0.3, initial, options);
  CHECK_FALSE(trace.converged);
  CHECK(trace.steps() == 3);
  CHECK(trace.iterations.size() == 4);
  CHECK(trace.final_residual > 1e-15);
}

TEST_CASE("dynamics reject malformed input") {
  const MarketConfig config = testutil::two_cp_market();
  QuantityProfile initial;
  initial.q = {0.0, 0.0};
  CHECK_THROWS_AS(br_dynamics(config, 1.0, initial), DomainError);
  CHECK_THROWS_AS(br_dynamics(config, 0.0, initial), DomainError);
  QuantityProfile wrong_size;
  wrong_size.q = {0.0};
  CHECK_THROWS_AS(br_dynamics(config, 0.3, wrong_size), DomainError);
  QuantityProfile negative;
  negative.q = {0.0, -1.0};
  CHECK_THROWS_AS(br_dynamics(config, 0.3, negative), DomainError);
}

TEST_CASE("uncoded rounding") {
  QuantityProfile profile;
  profile.q = {98.0 / 51.0, 35.0 / 17.0};
  const QuantityProfile rounded = round_uncoded(profile);
  REQUIRE(rounded.rounded.has_value());
  CHECK((*rounded.rounded)[0] == 2);
  CHECK((*rounded.rounded)[1] == 2);
  CHECK(rounded.q == profile.q);

  QuantityProfile tie;
  tie.q = {0.5};
  CHECK((*round_uncoded(tie).rounded)[0] == 1);

  QuantityProfile zero;
  zero.q = {0.0};
  CHECK((*round_uncoded(zero).rounded)[0] == 0);

  CHECK_THROWS_AS(round_uncoded(rounded), DomainError);
}

TEST_CASE("rounding never moves more than half a file") {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> q_dist(0.0, 40.0);
  for (int trial = 0; trial < 200; ++trial) {
    QuantityProfile profile;
    for (int m = 0; m < 4; ++m) profile.q.push_back(q_dist(rng));
    const QuantityProfile rounded = round_uncoded(profile);
    for (std::size_t m = 0; m < profile.q.size(); ++m)
      CHECK(std::abs(static_cast<double>((*rounded.rounded)[m]) - profile.q[m]) <= 0.5);
  }
}

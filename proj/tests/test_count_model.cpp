#include <doctest.h>

#include <cmath>

#include "spadaac/count_model.hpp"
#include "spadaac/numerics.hpp"
#include "test_support.hpp"

using namespace spadaac;

TEST_CASE("trigger probability matches the closed form") {
  ReceiverConfig rx = testsup::default_receiver();
  Constellation cons{{0.0, 10.0}};

  SUBCASE("no photons, no trigger") {
    rx.dark_rate_cpns = 0.0;
    ChannelEstimate est{10.0, 0.0};
    CHECK(trigger_probability(rx, est, cons, 0, 1.0) == 0.0);
  }
  SUBCASE("half-life identity") {
    // level chosen so alpha * exponent = ln 2
    rx.dark_rate_cpns = 0.0;
    const double ln2 = std::log(2.0);
    Constellation c{{0.0, ln2 / 0.2}};
    ChannelEstimate est{c.levels_cpns[1], 0.0};
    CHECK(trigger_probability(rx, est, c, 1, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("scalar evaluation at the spec operating point") {
    // pde 0.2, levels 10 + background 5, dark 0.01, 1 ns gate: exponent 3.01
    ChannelEstimate est{10.0, 5.0};
    const double expected = 1.0 - std::exp(-3.01);
    CHECK(trigger_probability(rx, est, cons, 1, 1.0) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(trigger_probability(rx, est, cons, 1, 1.0) ==
          doctest::Approx(0.9507083).epsilon(1e-6));
  }
  SUBCASE("domain errors") {
    ChannelEstimate est{10.0, 5.0};
    CHECK_THROWS_AS(trigger_probability(rx, est, cons, 1, 0.0), DomainError);
    CHECK_THROWS_AS(trigger_probability(rx, est, cons, 1, 1.1), DomainError);
    CHECK_THROWS_AS(trigger_probability(rx, est, cons, 2, 0.5), DomainError);
  }
}

TEST_CASE("count PMF point masses at the extremes") {
  SUBCASE("zero trigger probability piles on k = 0") {
    CountModel m = CountModel::from_trigger_probs(100, {0.0, 0.5});
    CHECK(m.pmfs[0][0] == 1.0);
    for (int k = 1; k <= 100; ++k) CHECK(m.pmfs[0][k] == 0.0);
  }
  SUBCASE("unit trigger probability piles on k_max") {
    CountModel m = CountModel::from_trigger_probs(100, {0.5, 1.0});
    CHECK(m.pmfs[1][100] == 1.0);
    CHECK(m.pmfs[1][0] == 0.0);
  }
}

TEST_CASE("count PMF rows are normalized binomials over a random grid") {
  testsup::Rng rng(20260810);
  for (int trial = 0; trial < 200; ++trial) {
    ReceiverConfig rx = testsup::default_receiver();
    rx.pde = rng.uniform(0.05, 1.0);
    rx.array_size = rng.uniform_int(1, 4);
    rx.gate_duration_ns = rng.uniform(0.1, 2.0);
    rx.dead_time_ns = rng.uniform(1.0, 20.0);
    rx.symbol_duration_ns = rng.uniform(50.0, 2000.0);
    rx.dark_rate_cpns = rng.uniform(0.0, 0.1);
    if (k_max(rx) > 500) continue;  // the model's regime is hundreds of gates
    const double peak = rng.uniform(0.5, 80.0);
    ChannelEstimate est{peak, rng.uniform(0.0, 50.0)};
    Constellation cons = square_root_constellation(peak, rng.uniform_int(2, 8));
    const double alpha = rng.uniform(0.01, 1.0);

    CountModel model = count_pmf(rx, est, cons, alpha);
    for (int m = 0; m < model.order(); ++m) {
      KahanSum sum;
      for (double p : model.pmfs[m]) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        sum.add(p);
      }
      CHECK(std::abs(sum.value() - 1.0) <= 1e-12);

      const double p_tri = model.trigger_probs[m];
      const double mean = pmf_mean(model.pmfs[m]);
      const double expect_mean = model.k_max * p_tri;
      const double var = pmf_variance(model.pmfs[m], expect_mean);
      // 1 - p_tri from the exponent directly: near saturation the rounded
      // (1.0 - p_tri) would lose most of its relative accuracy
      const double expect_var = model.k_max * p_tri * std::exp(-model.exponents[m]);
      if (expect_mean > 0.0)
        CHECK(std::abs(mean - expect_mean) <= 1e-9 * expect_mean);
      if (expect_var > 0.0)
        CHECK(std::abs(var - expect_var) <= 1e-9 * expect_var);
    }
  }
}

TEST_CASE("binomial mean and variance at the spec point") {
  CountModel m = CountModel::from_trigger_probs(100, {0.2, 0.5});
  CHECK(pmf_mean(m.pmfs[1]) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(pmf_variance(m.pmfs[1], 50.0) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("trigger probability is monotone in attenuation and level") {
  ReceiverConfig rx = testsup::default_receiver();
  ChannelEstimate est{50.0, 10.0};
  Constellation cons = square_root_constellation(50.0, 4);
  double prev = -1.0;
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const double p = trigger_probability(rx, est, cons, 2, alpha);
    CHECK(p > prev);
    prev = p;
  }
  CountModel model = count_pmf(rx, est, cons, 0.8);
  for (int m = 1; m < model.order(); ++m)
    CHECK(model.trigger_probs[m] > model.trigger_probs[m - 1]);
}

TEST_CASE("PMF is stochastically increasing in the trigger probability") {
  ReceiverConfig rx = testsup::default_receiver();
  ChannelEstimate est{50.0, 10.0};
  Constellation cons = square_root_constellation(50.0, 4);
  CountModel lo = count_pmf(rx, est, cons, 0.4);
  CountModel hi = count_pmf(rx, est, cons, 0.9);
  for (int m = 0; m < lo.order(); ++m) {
    double cdf_lo = 0.0, cdf_hi = 0.0;
    for (int k = 0; k < lo.k_max; ++k) {
      cdf_lo += lo.pmfs[m][k];
      cdf_hi += hi.pmfs[m][k];
      CHECK(cdf_hi <= cdf_lo + 1e-12);
    }
  }
}

TEST_CASE("saturation limit sends all mass to k_max") {
  ReceiverConfig rx = testsup::default_receiver();
  ChannelEstimate est{500.0, 100.0};
  Constellation cons = square_root_constellation(500.0, 2);
  CountModel m = count_pmf(rx, est, cons, 1.0);
  CHECK(m.pmfs[1][m.k_max] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("count_pmf rejects degenerate constellations") {
  ReceiverConfig rx = testsup::default_receiver();
  ChannelEstimate est{1.0, 0.0};
  Constellation dup{{1.0, 1.0}};
  CHECK_THROWS_AS(count_pmf(rx, est, dup, 1.0), DegenerateConstellationError);
}

TEST_CASE("PMF rows match the recurrence-built binomial oracle") {
  testsup::Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int kmax = rng.uniform_int(10, 300);
    const double p = rng.uniform(0.001, 0.999);
    CountModel m = CountModel::from_trigger_probs(kmax, {p / 2.0, p});
    const auto oracle = testsup::binomial_pmf_recurrence(kmax, p);
    for (int k = 0; k <= kmax; ++k) {
      CHECK(m.pmfs[1][k] == doctest::Approx((double)oracle[k]).epsilon(1e-10));
    }
  }
}

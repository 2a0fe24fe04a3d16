#include <gtest/gtest.h>

#include <random>
#include <xxzent/brute_force.hpp>
#include <xxzent/exact.hpp>

#include "oracles.hpp"

using namespace xxzent;

TEST(Exact, MatchesBruteForce) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> g(0.0, 1.0), b(-1.5, 1.5), t(0.02, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 9;
    ModelParams p{n, 1.0, g(rng), b(rng), t(rng)};
    const auto ex = exact_state(p);
    const auto bf = brute_force_state(p);
    EXPECT_LT(oracle::rel_diff(ex.moments.logZ, bf.moments.logZ), 1e-10);
    EXPECT_LT(oracle::rel_diff(ex.moments.sz, bf.moments.sz), 1e-10);
    EXPECT_LT(oracle::rel_diff(ex.moments.sz2, bf.moments.sz2), 1e-10);
    EXPECT_LT(oracle::rel_diff(ex.moments.s2, bf.moments.s2), 1e-10);
    EXPECT_NEAR(concurrence(ex.pair, n).concurrence,
                concurrence(brute_force_pair(bf), n).concurrence, 1e-10);
  }
}

TEST(Exact, DerivativeIdentities) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> g(0.1, 0.9), b(-1.2, 1.2), t(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial;
    ModelParams p{n, 1.0, g(rng), b(rng), t(rng)};
    const auto m = exact_moments(p);
    auto lz_b = [&](double x) { return exact_moments(p.with_b(x)).logZ; };
    auto lz_v = [&](double x) { return exact_moments(p.with_v(x)).logZ; };
    auto lz_g = [&](double x) { return exact_moments(p.with_gamma(x)).logZ; };
    const double h = 1e-3;
    EXPECT_NEAR(m.sz, -p.T * oracle::derivative(lz_b, p.b, h), 1e-7);
    EXPECT_NEAR(m.sz2, p.T * p.T * oracle::second_derivative(lz_b, p.b, h) + m.sz * m.sz, 1e-6);
    EXPECT_NEAR(m.s2,
                n * p.T * oracle::derivative(lz_v, p.v, h) + p.gamma * m.sz2 + n * (3 - p.gamma) / 4.0,
                1e-6);
    EXPECT_NEAR(m.sz2, n / 4.0 - n * p.T / p.v * oracle::derivative(lz_g, p.gamma, h), 1e-6);
  }
}

TEST(Exact, PairStateIsPhysical) {
  for (int n : {2, 3, 20, 101}) {
    for (double b : {0.0, 0.5, 2.0}) {
      for (double T : {0.01, 0.3, 3.0}) {
        const auto s = exact_state(ModelParams{n, 1.0, 0.8, b, T});
        EXPECT_GE(s.pair.p_plus, 0.0);
        EXPECT_GE(s.pair.p_minus, 0.0);
        EXPECT_GE(s.pair.p - std::abs(s.pair.alpha), -1e-14);
        EXPECT_NEAR(s.pair.p_plus + 2 * s.pair.p + s.pair.p_minus, 1.0, 1e-13);
        const double c = concurrence(s.pair, n).concurrence;
        EXPECT_LE(c, 2.0 / n + 1e-12);
      }
    }
  }
}

TEST(Exact, CrossingFieldDipsAndPeak) {
  ModelParams p{20, 1.0, 1.0, 0.0, 0.005};
  for (double bm : crossing_fields(p).fields) {
    if (bm <= 0) continue;
    EXPECT_NEAR(20 * exact_concurrence(p.with_b(bm)).concurrence, 1.0, 5e-3) << bm;
  }
  double best = 0.0;
  for (double b = 0.85; b <= 1.0; b += 1e-4)
    best = std::max(best, 20 * exact_concurrence(p.with_b(b)).concurrence);
  EXPECT_NEAR(best, 2.0, 0.01);
}

TEST(Exact, GroundStateMatchesLargeNExpansion) {
  const int n = 1000;
  for (double m : {0.0, 0.1, 0.3}) {
    const int twoM = static_cast<int>(2 * m * n);
    // Field at the centre of the plateau of this M value.
    const double b = -double(twoM) / n;
    ModelParams p{n, 1.0, 1.0, b, 0.0};
    const auto gs = ground_state(p);
    EXPECT_NEAR(gs.moments.sz, 0.5 * twoM, 1e-9);
    EXPECT_NEAR(concurrence(gs.pair, n).concurrence,
                zero_T_concurrence_approx(n, 0.5 * twoM / n), 1e-8);
  }
}

TEST(Exact, ZeroTemperatureMatchesLowTemperature) {
  ModelParams p{12, 1.0, 0.7, 0.23, 0.0};
  EXPECT_NEAR(exact_concurrence(p).concurrence,
              exact_concurrence(p.with_T(1e-3)).concurrence, 1e-9);
}

TEST(Exact, LargeFieldExpansion) {
  ModelParams p{20, 1.0, 1.0, 2.0, 0.05};
  const auto approx = large_field_expansion(p);
  ASSERT_EQ(approx.status, Status::ok);
  const double c = exact_concurrence(p).concurrence;
  EXPECT_LT(oracle::rel_diff(approx.concurrence, c, 0.0), 0.02);
  EXPECT_EQ(large_field_expansion(p.with_b(0.96)).status, Status::not_applicable);
}

TEST(Exact, LargeFieldLimitTemperature) {
  const double t = large_field_limit_temperature(20, 1.0, 1.0);
  EXPECT_NEAR(t, 0.1343, 0.0067);
  EXPECT_NEAR(large_field_limit_temperature_approx(20, 1.0, 1.0), 2.0 / (20 * std::log(40.0 / 19)),
              1e-15);
}

TEST(Exact, LogRatioSignMatchesEntanglement) {
  ModelParams p{30, 1.0, 1.0, 3.0, 0.02};
  const auto s = exact_state(p);
  // Deep in the exponentially small regime C may underflow but the ratio does not.
  EXPECT_TRUE(std::isfinite(s.log_ratio));
  EXPECT_GT(s.log_ratio, 0.0);
  EXPECT_LT(exact_state(p.with_T(0.5)).log_ratio, 0.0);
}

TEST(Exact, VeryLargeN) {
  ModelParams p{8810, 1.0, 1.0, 0.0, 0.1};
  const auto s = exact_state(p);
  EXPECT_TRUE(std::isfinite(s.moments.logZ));
  EXPECT_LT(concurrence(s.pair, p.n).concurrence, 0.1 / p.n);
}

TEST(Exact, EntanglementOfFormation) {
  EXPECT_DOUBLE_EQ(entanglement_of_formation(0.0), 0.0);
  EXPECT_NEAR(entanglement_of_formation(1.0), 1.0, 1e-15);
  double prev = 0.0;
  for (double c = 0.05; c <= 1.0; c += 0.05) {
    const double e = entanglement_of_formation(c);
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(Exact, InconsistentMomentsThrow) {
  CollectiveMoments m{0.0, 100.0, 0.0, 0.0};
  EXPECT_THROW(pair_state(m, 4), InconsistentMoments);
}

TEST(Exact, LargeFieldBracketNearTheLimitTemperature) {
  const ModelParams p{20, 1.0, 1.0, 3.0, 0.12};
  const auto approx = large_field_expansion(p);
  ASSERT_EQ(approx.status, Status::ok);
  EXPECT_LT(oracle::rel_diff(approx.concurrence, exact_concurrence(p).concurrence, 0.0), 0.01);
}

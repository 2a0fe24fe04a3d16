#include <gtest/gtest.h>

#include <random>
#include <xxzent/brute_force.hpp>
#include <xxzent/exact.hpp>

#include "oracles.hpp"

using namespace xxzent;

TEST(BruteForce, ReducedStateIsXShapedAndSymmetric) {
  ModelParams p{6, 1.0, 0.7, 0.4, 0.2};
  const auto r = brute_force_state(p);
  EXPECT_NEAR(r.rho2.trace(), 1.0, 1e-13);
  EXPECT_NEAR(r.rho2(1, 1), r.rho2(2, 2), 1e-13);
  EXPECT_NEAR(r.rho2(1, 2), r.rho2(2, 1), 1e-13);
  for (int i : {0, 3})
    for (int j = 0; j < 4; ++j)
      if (i != j) EXPECT_NEAR(r.rho2(i, j), 0.0, 1e-14);
}

TEST(BruteForce, PairStateMatchesMomentFormula) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> g(-0.5, 1.0), b(-1.5, 1.5), t(0.05, 1.5);
  for (int n = 2; n <= 9; ++n) {
    ModelParams p{n, 1.0, g(rng), b(rng), t(rng)};
    const auto r = brute_force_state(p);
    const auto from_rho = brute_force_pair(r);
    const auto from_m = pair_state(r.moments, n);
    EXPECT_NEAR(from_rho.p_plus, from_m.p_plus, 1e-12);
    EXPECT_NEAR(from_rho.p_minus, from_m.p_minus, 1e-12);
    EXPECT_NEAR(from_rho.alpha, from_m.alpha, 1e-12);
  }
}

TEST(BruteForce, XFormulaAgreesWithWootters) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> g(0.0, 1.0), b(-1.2, 1.2), t(0.02, 0.6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    ModelParams p{n, 1.0, g(rng), b(rng), t(rng)};
    const auto r = brute_force_state(p);
    const double c = concurrence(brute_force_pair(r), n).concurrence;
    EXPECT_NEAR(c, oracle::wootters_concurrence(r.rho2.cast<std::complex<double>>()), 1e-10);
  }
}

TEST(BruteForce, TwoSpinBellGroundState) {
  // n = 2, |b| < 1/2: the M = 0 triplet is the unique ground state.
  ModelParams p{2, 1.0, 1.0, 0.2, 1e-3};
  const auto r = brute_force_state(p);
  EXPECT_NEAR(r.moments.s2, 2.0, 1e-12);
  EXPECT_NEAR(concurrence(brute_force_pair(r), 2).concurrence, 1.0, 1e-12);
  // Past the crossing the ground state is a product state.
  const auto q = brute_force_state(p.with_b(0.8));
  EXPECT_NEAR(concurrence(brute_force_pair(q), 2).concurrence, 0.0, 1e-12);
}

TEST(BruteForce, RejectsLargeN) {
  EXPECT_THROW(brute_force_state(ModelParams{15, 1.0, 1.0, 0.0, 0.1}), DomainError);
  EXPECT_THROW(brute_force_state(ModelParams{4, 1.0, 1.0, 0.0, 0.0}), DomainError);
}

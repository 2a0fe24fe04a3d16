#include <gtest/gtest.h>

#include <cmath>
#include <xxzent/model.hpp>

#include "oracles.hpp"

using namespace xxzent;

TEST(Multiplicity, SumsToHilbertDimension) {
  for (int n = 2; n <= 40; ++n) {
    unsigned __int128 total = 0;
    for (int twoS = n % 2; twoS <= n; twoS += 2)
      total += multiplicity_exact(n, HalfInt{twoS}) * static_cast<unsigned>(twoS + 1);
    EXPECT_TRUE(total == (static_cast<unsigned __int128>(1) << n)) << "n=" << n;
  }
}

TEST(Multiplicity, SmallCases) {
  EXPECT_EQ(multiplicity(2, HalfInt{2}), 1u);
  EXPECT_EQ(multiplicity(2, HalfInt{0}), 1u);
  EXPECT_EQ(multiplicity(4, HalfInt{0}), 2u);
  EXPECT_EQ(multiplicity(4, HalfInt{2}), 3u);
  EXPECT_EQ(multiplicity(3, HalfInt{1}), 2u);
  EXPECT_THROW(multiplicity(4, HalfInt{1}), DomainError);
}

TEST(Multiplicity, LogFormMatchesExactNear64) {
  const int n = 64;
  for (int twoS = 0; twoS <= n; twoS += 2) {
    const int k = (n - twoS) / 2;
    const double approx = detail::log_binomial(n, k) + std::log(twoS + 1.0) - std::log(n - k + 1.0);
    EXPECT_NEAR(approx, log_multiplicity(n, HalfInt{twoS}), 1e-10);
  }
  EXPECT_TRUE(std::isfinite(log_multiplicity(10000, HalfInt{0})));
}

TEST(Spectrum, TwoSpinsMatchDenseDiagonalization) {
  // E0 cancels the on-site terms, so the levels equal the bare pair Hamiltonian.
  for (double g : {1.0, 0.5, 0.0, -0.7}) {
    for (double b : {0.0, 0.3, -1.2}) {
      ModelParams p{2, 1.0, g, b, 0.1};
      std::vector<double> e;
      for (const auto& row : spectrum_table(p)) e.push_back(row.energy);
      std::sort(e.begin(), e.end());
      const auto ref = oracle::two_spin_spectrum(1.0, g, b);
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(e[k], ref(k), 1e-13);
    }
  }
}

TEST(Spectrum, TableSize) {
  ModelParams p{7, 1.0, 1.0, 0.0, 0.1};
  std::size_t expected = 0;
  for (int twoS = 1; twoS <= 7; twoS += 2) expected += twoS + 1;
  EXPECT_EQ(spectrum_table(p).size(), expected);
}

TEST(Spectrum, ZeroFieldGroundEnergy) {
  // Fully polarized S = n/2, M = 0 ground level at b = 0, gamma = 1.
  ModelParams p{20, 1.0, 1.0, 0.0, 0.0};
  const double e = level_energy(p, HalfInt{20}, HalfInt{0});
  EXPECT_NEAR(e, -(1.0 / 20) * 10 * 11 + 0.5, 1e-14);
}

TEST(CrossingFields, EvenN) {
  ModelParams p{20, 1.0, 1.0, 0.0, 0.0};
  const auto cf = crossing_fields(p);
  ASSERT_EQ(cf.fields.size(), 20u);
  EXPECT_NEAR(cf.critical, 0.95, 1e-15);
  EXPECT_NEAR(cf.fields.back(), 0.95, 1e-15);
  EXPECT_NEAR(cf.fields.front(), -0.95, 1e-15);
  int positive = 0;
  for (double f : cf.fields) positive += f > 0.0;
  EXPECT_EQ(positive, 10);
}

TEST(CrossingFields, TwoSpins) {
  ModelParams p{2, 1.0, 1.0, 0.0, 0.0};
  const auto cf = crossing_fields(p);
  ASSERT_EQ(cf.fields.size(), 2u);
  EXPECT_DOUBLE_EQ(cf.fields[0], -0.5);
  EXPECT_DOUBLE_EQ(cf.fields[1], 0.5);
  EXPECT_DOUBLE_EQ(cf.critical, 0.5);
}

TEST(CrossingFields, GroundStateChangesExactlyThere) {
  ModelParams p{9, 1.0, 0.6, 0.0, 0.0};
  for (double bm : crossing_fields(p).fields) {
    // Levels M and M-1 of S = n/2 are degenerate at b_M.
    const int twoM = static_cast<int>(std::lround(1.0 - bm * p.n / (p.gamma * p.v)));
    const auto q = p.with_b(bm);
    EXPECT_NEAR(level_energy(q, HalfInt{9}, HalfInt{twoM}),
                level_energy(q, HalfInt{9}, HalfInt{twoM - 2}), 1e-12);
  }
}

TEST(CrossingFields, AlignedForNonPositiveGamma) {
  ModelParams p{10, 1.0, -0.5, 0.0, 0.0};
  EXPECT_TRUE(crossing_fields(p).aligned);
  EXPECT_TRUE(crossing_fields(p).fields.empty());
}

TEST(Params, Validation) {
  EXPECT_THROW((ModelParams{1, 1.0, 1.0, 0.0, 0.1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{4, -1.0, 1.0, 0.0, 0.1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{4, 1.0, 1.5, 0.0, 0.1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{4, 1.0, 1.0, 0.0, -0.1}.validate()), DomainError);
  EXPECT_NO_THROW((ModelParams{4, 1.0, -3.0, 2.0, 0.0}.validate()));
}

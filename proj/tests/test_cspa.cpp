#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <xxzent/cmfa.hpp>
#include <xxzent/cspa.hpp>
#include <xxzent/exact.hpp>

#include "oracles.hpp"

using namespace xxzent;

namespace {

double c_cspa(const ModelParams& p, Tier mode = Tier::cspa) {
  return concurrence(pair_state(cspa_moments(p, mode), p.n), p.n).concurrence;
}

double c_exact(const ModelParams& p) { return exact_concurrence(p).concurrence; }

}  // namespace

TEST(Cspa, BreakdownTemperatureAtZeroField) {
  const double ts = breakdown_temperature(ModelParams{20, 1.0, 1.0, 0.0, 0.1});
  EXPECT_NEAR(ts, 1.0 / (4.0 * std::numbers::pi), 0.1 / (4.0 * std::numbers::pi));
  EXPECT_LT(breakdown_temperature(ModelParams{20, 1.0, 1.0, 0.5, 0.1}), ts);
  EXPECT_EQ(breakdown_temperature(ModelParams{20, 1.0, 1.0, 1.1, 0.1}), 0.0);
}

TEST(Cspa, BreakdownIsReported) {
  const ModelParams p{20, 1.0, 1.0, 0.0, 0.05};
  const auto ev = cspa_evaluate(p);
  EXPECT_EQ(ev.status, Status::breakdown);
  EXPECT_FALSE(ev.message.empty());
  EXPECT_THROW(cspa_moments(p), BreakdownError);
  EXPECT_THROW(cspa_logZ(p), BreakdownError);
  // the plain static path never breaks down
  EXPECT_EQ(cspa_evaluate(p, Tier::spa).status, Status::ok);
}

TEST(Cspa, FrequencyAtTheOrigin) {
  for (double b : {0.3, 1.2})
    for (double T : {0.1, 0.5}) {
      const ModelParams p{20, 1.0, 1.0, b, T};
      const double w = b - std::tanh(0.5 * b / T);
      EXPECT_NEAR(std::norm(rpa_frequency(p, 1e-7)), w * w, 1e-9);
    }
  EXPECT_THROW(rpa_frequency(ModelParams{20, 1.0, 1.0, 0.0, 0.1}, 0.0), DomainError);
}

TEST(Cspa, ImaginaryFrequencyAtLowTemperature) {
  const auto w = rpa_frequency(ModelParams{20, 1.0, 1.0, 0.0, 0.005}, 0.5);
  EXPECT_NEAR(w.real(), 0.0, 1e-12);
  EXPECT_NEAR(w.imag(), 0.5, 1e-6);
}

TEST(Cspa, FrequencyVanishesAtTheMeanFieldPoint) {
  for (double g : {1.0, 0.5}) {
    const ModelParams p{20, 1.0, g, 0.2, 0.15};
    const auto mf = gap_solve(p);
    ASSERT_EQ(mf.phase, Phase::deformed);
    EXPECT_LT(std::abs(rpa_frequency(p, mf.r, mf.z)), 1e-6);
  }
}

TEST(Cspa, MatchesClosedFormFrequency) {
  for (double g : {1.0, 0.3})
    for (double r : {0.2, 0.7})
      for (double T : {0.1, 0.4}) {
        const ModelParams p{30, 1.0, g, 0.5, T};
        const double z = g < 1.0 ? -0.1 : 0.0;
        EXPECT_NEAR(std::norm(rpa_frequency(p, r, z)),
                    std::abs(oracle::closed_form_omega2(1.0, g, 0.5, r, z, T)), 1e-12);
      }
}

TEST(Cspa, QuadratureWithinBudget) {
  for (double b : {0.0, 0.9, 2.0})
    for (double T : {0.1, 0.5, 2.0}) {
      const auto ev = cspa_evaluate(ModelParams{20, 1.0, 1.0, b, T});
      if (ev.status == Status::breakdown) continue;
      EXPECT_EQ(ev.status, Status::ok) << b << " " << T;
      EXPECT_LT(ev.quadrature_error, kCspaQuadratureBudget);
    }
  const auto ev = cspa_evaluate(ModelParams{20, 1.0, 0.5, 0.3, 0.3}, Tier::cspa, {.moments = false});
  EXPECT_EQ(ev.status, Status::ok);
  EXPECT_LT(ev.quadrature_error, kCspaQuadratureBudget);
}

TEST(Cspa, MomentsMatchDerivativesOfLogZ) {
  for (double g : {1.0, 0.6}) {
    const ModelParams p{20, 1.0, g, 0.4, 0.25};
    const auto m = cspa_moments(p);
    auto lz_b = [&](double x) { return cspa_logZ(p.with_b(x)); };
    auto lz_v = [&](double x) { return cspa_logZ(p.with_v(x)); };
    const double h = 1e-3;
    EXPECT_NEAR(m.sz, -p.T * oracle::derivative(lz_b, p.b, h), 1e-6);
    EXPECT_NEAR(m.sz2, p.T * p.T * oracle::second_derivative(lz_b, p.b, h) + m.sz * m.sz, 1e-5);
    EXPECT_NEAR(m.s2, p.n * p.T * oracle::derivative(lz_v, p.v, h) + g * m.sz2 + p.n * (3.0 - g) / 4.0, 1e-5);
  }
}

TEST(Cspa, CloseToExactAtHighTemperature) {
  for (double b : {0.0, 0.8, 1.6}) {
    const ModelParams p{20, 1.0, 1.0, b, 2.0};
    const auto mc = cspa_moments(p);
    const auto me = exact_moments(p);
    EXPECT_NEAR(mc.logZ, me.logZ, 1e-3 * p.n);
    EXPECT_NEAR(mc.sz, me.sz, 1e-2);
    EXPECT_NEAR(c_cspa(p), c_exact(p), 1e-3 / p.n);
  }
}

TEST(Cspa, AccuracyWindowAtStrongField) {
  for (int i = 0; i <= 8; ++i) {
    const ModelParams p{20, 1.0, 1.0, 0.9, 0.1 + 0.05 * i};
    EXPECT_LE(std::abs(c_cspa(p) - c_exact(p)), 0.05 * 2.0 / p.n) << p.T;
  }
}

TEST(Cspa, ImprovesOnMeanFieldNearTheCriticalField) {
  const ModelParams p{20, 1.0, 1.0, 1.0, 0.15};
  const double ex = c_exact(p);
  EXPECT_LT(std::abs(c_cspa(p) - ex), std::abs(cmfa_concurrence(p).concurrence - ex));
}

TEST(Cspa, StaticPathIsSeparable) {
  for (double g : {1.0, 0.5})
    for (double b : {0.0, 0.7, 1.5}) {
      const ModelParams p{20, 1.0, g, b, 0.2};
      EXPECT_LT(c_cspa(p, Tier::spa), 1e-12);
    }
}

TEST(Cspa, IsotropicLimitOfTheTwoDimensionalIntegral) {
  // ln Z is smooth in gamma with an O(1 - gamma) slope: a quadratic through
  // three anisotropic points extrapolates to the one-dimensional result.
  const ModelParams p{20, 1.0, 1.0, 0.3, 0.3};
  const double l1 = cspa_logZ(p);
  const double a = cspa_logZ(p.with_gamma(0.999));
  const double b = cspa_logZ(p.with_gamma(0.998));
  const double c = cspa_logZ(p.with_gamma(0.996));
  // Lagrange extrapolation to 1 - gamma = 0 from eps = 1e-3, 2e-3, 4e-3
  const double extrap = a * (8.0 / 3.0) - b * 2.0 + c * (1.0 / 3.0);
  EXPECT_NEAR(extrap, l1, 1e-6);
  EXPECT_GT(std::abs(a - l1), 1e-4);  // the raw offset is O(1 - gamma)
}

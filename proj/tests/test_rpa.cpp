#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <xxzent/cmfa.hpp>
#include <xxzent/rpa.hpp>
#include <xxzent/rpa_xxz.hpp>

#include "oracles.hpp"

using namespace xxzent;
using rpa::cplx;

namespace {

// Static configuration of the XXZ system at transverse field r and shift z.
rpa::StaticConfiguration at(const ModelParams& p, double r, double z = 0.0) {
  return rpa::linearize(xxz_system(p), xxz_static_field(p, r, z), p.T);
}

double engine_omega2(const ModelParams& p, double r, double z = 0.0) {
  const auto sp = rpa::rpa_energies(at(p, r, z), xxz_system(p));
  const cplx w = sp.omegas.front();
  return (w * w).real();
}

// Deformed-phase gap from lambda = v tanh(beta lambda/2), solved independently.
double gap_oracle(double v, double T) {
  double lo = 1e-12, hi = v;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    (m < v * std::tanh(0.5 * m / T) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Rpa, UncoupledModeIsTheLocalGap) {
  rpa::LocalSite site;
  site.h0 = rpa::Matrix::Zero(2, 2);
  site.h0(0, 0) = 0.35;
  site.h0(1, 1) = -0.35;
  rpa::Matrix sx = rpa::Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 0.5;
  site.q_ops = {sx};
  rpa::CoupledSystem sys{{site}, {1e-13}};
  const auto cfg = rpa::linearize(sys, rpa::Vector::Zero(1), 0.2);
  const auto sp = rpa::rpa_energies(cfg, sys);
  ASSERT_EQ(sp.omegas.size(), 2u);
  for (auto w : sp.omegas) EXPECT_NEAR(std::abs(w), 0.7, 1e-10);
  EXPECT_NEAR(rpa::c_rpa(sp, 0.2), 1.0, 1e-10);
}

TEST(Rpa, ResponseVanishesAtHighTemperature) {
  const ModelParams p{10, 1.0, 0.7, 0.4, 1e7};
  const auto r = rpa::response_matrix(at(p, 0.3, 0.1), cplx(0.2, 0.0));
  EXPECT_LT(r.norm(), 1e-6);
}

TEST(Rpa, ModesComeInPlusMinusPairs) {
  for (double g : {1.0, 0.4}) {
    const ModelParams p{12, 1.0, g, 0.3, 0.25};
    const auto sp = rpa::rpa_energies(at(p, 0.5, 0.05), xxz_system(p));
    ASSERT_EQ(sp.omegas.size() % 2, 0u);
    for (auto w : sp.omegas) {
      bool partner = false;
      for (auto u : sp.omegas) partner = partner || std::abs(u + w) < 1e-9;
      EXPECT_TRUE(partner) << w;
    }
  }
}

TEST(Rpa, ModesZeroTheResponseDeterminant) {
  for (double g : {1.0, 0.6}) {
    const ModelParams p{16, 1.0, g, 0.2, 0.3};
    const auto sys = xxz_system(p);
    const auto cfg = at(p, 0.7, -0.1);
    const auto sp = rpa::rpa_energies(cfg, sys);
    for (auto w : sp.omegas) EXPECT_LT(rpa::determinant_residual(cfg, sys, w), 1e-9) << w;
    EXPECT_GT(rpa::determinant_residual(cfg, sys, cplx(0.123, 0.0)), 1e-4);
  }
}

TEST(Rpa, ReproducesClosedFormFrequency) {
  for (double g : {1.0, 0.5, 0.0}) {
    for (double r : {0.05, 0.4, 0.9}) {
      for (double b : {0.0, 0.6, 1.4}) {
        for (double T : {0.08, 0.3, 1.0}) {
          const double z = g < 1.0 ? 0.15 : 0.0;
          const ModelParams p{20, 1.0, g, b, T};
          const double expect = oracle::closed_form_omega2(1.0, g, b, r, z, T);
          EXPECT_LT(oracle::rel_diff(engine_omega2(p, r, z), expect, 1e-3), 1e-8)
              << "g=" << g << " r=" << r << " b=" << b << " T=" << T;
        }
      }
    }
  }
}

TEST(Rpa, OmegaIsContinuousInTheField) {
  const ModelParams p{20, 1.0, 1.0, 0.0, 0.2};
  double prev = engine_omega2(p, 0.6);
  for (int i = 1; i <= 100; ++i) {
    const double w2 = engine_omega2(p.with_b(0.01 * i), 0.6);
    EXPECT_LT(std::abs(w2 - prev), 0.02);
    prev = w2;
  }
}

TEST(Rpa, HartreeNormalAboveTc) {
  for (double b : {0.0, 0.5}) {
    const ModelParams p{20, 1.0, 1.0, b, 1.05 * critical_temperature(b, 1.0)};
    const auto sol = rpa::hartree_solve(xxz_system(p), p.T, {});
    EXPECT_LT(sol.config.x.norm(), 1e-8);
  }
}

TEST(Rpa, HartreeGapIsFieldIndependent) {
  const double T = 0.2;
  const double lambda = gap_oracle(1.0, T);
  for (double b : {0.0, 0.3, 0.6}) {
    const ModelParams p{20, 1.0, 1.0, b, T};
    const auto sol = rpa::hartree_solve(xxz_system(p), T, {});
    const double r = std::hypot(sol.config.x(0), sol.config.x(1));
    EXPECT_NEAR(std::hypot(b, r), lambda, 1e-9) << b;
  }
  const ModelParams cold{20, 1.0, 1.0, 0.0, 0.01};
  const auto sol = rpa::hartree_solve(xxz_system(cold), cold.T, {});
  EXPECT_NEAR(sol.config.x.norm(), 1.0, 1e-9);
}

TEST(Rpa, LowestModeVanishesAtTheMeanFieldSolution) {
  for (double g : {1.0, 0.6}) {
    for (double b : {0.0, 0.25}) {
      const ModelParams p{20, 1.0, g, b, 0.15};
      const auto sys = xxz_system(p);
      const auto sol = rpa::hartree_solve(sys, p.T, {});
      const auto sp = rpa::rpa_energies(sol.config, sys);
      EXPECT_LT(sp.lowest(), 1e-6);
      // the finite omega -> 0 limit of C_RPA
      const double lambda = gap_oracle(1.0, p.T);
      const double x = 0.5 * lambda / p.T;
      if (g == 1.0) EXPECT_NEAR(sp.log_c_rpa, std::log(std::sinh(x) / x), 1e-5);
    }
  }
}

TEST(Rpa, ImaginaryModeBelowTheStationaryPoint) {
  const ModelParams p{20, 1.0, 1.0, 0.0, 0.15};
  const double r_mf = gap_oracle(1.0, p.T);
  EXPECT_LT(engine_omega2(p, 0.5 * r_mf), 0.0);
  EXPECT_GT(engine_omega2(p, 1.2 * r_mf), 0.0);
}

TEST(Rpa, BreakdownIsReported) {
  const ModelParams p{20, 1.0, 1.0, 0.0, 0.03};
  const auto sp = rpa::rpa_energies(at(p, 0.5), xxz_system(p));
  EXPECT_FALSE(sp.valid);
  EXPECT_THROW(rpa::log_c_rpa(sp, p.T), BreakdownError);
}

TEST(Rpa, StaticFactorTendsToOneForWeakCoupling) {
  double prev = numerics::inf;
  for (double v : {0.1, 0.01, 0.001}) {
    const ModelParams p{10, v, 0.5, 0.4, 0.5};
    const auto sys = xxz_system(p);
    const auto cfg = rpa::linearize(sys, xxz_static_field(p, 0.0, 0.0), p.T);
    const auto c0 = rpa::c0_factor(cfg, sys);
    EXPECT_LT(std::abs(c0.log_c0), prev);
    prev = std::abs(c0.log_c0);
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Rpa, EngineMatchesClosedFormCmfa) {
  for (double g : {1.0, 0.6}) {
    for (double b : {0.0, 0.3, 1.5}) {
      for (double T : {0.1, 0.3, 0.7}) {
        const ModelParams p{50, 1.0, g, b, T};
        const auto eng = engine_cmfa(p);
        EXPECT_LT(oracle::rel_diff(eng.logZ, cmfa_logZ(p)), 1e-9) << "g=" << g << " b=" << b << " T=" << T;
      }
    }
  }
}

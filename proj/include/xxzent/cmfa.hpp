#pragma once

// Mean field + RPA (CMFA) closed forms for the collective XXZ model, and the
// plain mean field (MFA) obtained by dropping the RPA and static-fluctuation
// factors.
//
// Deformed phase (|b| < gamma v, T < Tc(|b|/gamma)): the gap lambda solves
// lambda = v tanh(beta lambda/2), the longitudinal shift gives b - z = b/gamma
// and the transverse field is r = sqrt(lambda^2 - b^2/gamma^2). The Gaussian
// treatment of r and z gives
//   ln Z = -(n beta/4v)(lambda^2 - b^2/gamma) + n ln 2cosh(beta lambda/2) - beta E0
//          + ln sinh(beta lambda/2) + 1/2 ln[4 pi n/(beta v (1 - chi))] - 1/2 ln gamma,
//   chi = (beta v/2) sech^2(beta lambda/2),
// so that ln Z(gamma, b) = ln Z(1, b/sqrt(gamma)) - 1/2 ln gamma - beta v (1 - gamma)/4.

#include <cmath>
#include <numbers>
#include <optional>

#include "common.hpp"
#include "derivatives.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace xxzent {

enum class Phase { deformed, normal };

inline std::string_view to_string(Phase ph) { return ph == Phase::deformed ? "deformed" : "normal"; }

struct MeanFieldSolution {
  Phase phase = Phase::normal;
  double lambda = 0.0;  // gap of the linearized single-spin problem
  double chi = 0.0;
  double tc = 0.0;      // Tc at the rescaled field |b|/gamma
  double r = 0.0;       // transverse static field
  double z = 0.0;       // longitudinal static field
  bool applicable = true;
  double b_star = numerics::inf;  // applicability edge, finite only for T <= T~
};

/// Mean field critical temperature Tc(b) = b / (2 atanh(b/v)), Tc(0) = v/2.
inline double critical_temperature(double b, double v) {
  const double x = std::abs(b) / v;
  if (x >= 1.0) return 0.0;
  if (x < 1e-8) return 0.5 * v * (1.0 - x * x / 3.0);
  return std::abs(b) / (2.0 * std::atanh(x));
}

/// T~ = gamma v/(2n): at this temperature the CMFA concurrence is flat at 1/n.
inline double plateau_temperature(const ModelParams& p) { return p.gamma * p.v / (2.0 * p.n); }

namespace detail {

inline double chi_of(double lambda, double v, double beta) {
  return 0.5 * beta * v * numerics::sech2(0.5 * beta * lambda);
}

// Root of lambda = v tanh(beta lambda/2) above lo (requires T < Tc(lo)).
inline double gap_root(double v, double beta, double lo) {
  auto g = [&](double l) { return v * std::tanh(0.5 * beta * l) - l; };
  lo = std::max(lo, 1e-12 * v);
  if (g(lo) <= 0.0) return lo;
  return numerics::bisect(g, lo, v, 1e-15 * v, 400);
}

// Normal phase: u = b - z0 solves u = b + (1 - gamma) v tanh(beta u/2); the root
// aligned with b minimizes F.
inline double normal_gap(const ModelParams& p) {
  const double beta = p.beta();
  const double a = std::abs(p.b);
  const double w = (1.0 - p.gamma) * p.v;
  if (w <= 0.0) return a;
  auto f = [&](double u) { return a + w * std::tanh(0.5 * beta * u) - u; };
  if (a == 0.0 && 0.5 * beta * w <= 1.0) return 0.0;
  const double lo = a == 0.0 ? 1e-300 : a;
  return numerics::bisect(f, lo, a + w, 1e-15 * (a + w), 400);
}

inline MeanFieldSolution normal_solution(const ModelParams& p) {
  MeanFieldSolution mf;
  mf.phase = Phase::normal;
  const double u = normal_gap(p);
  mf.lambda = u;
  mf.z = p.b - std::copysign(u, p.b == 0.0 ? 1.0 : p.b);
  mf.chi = chi_of(u, p.v, p.beta());
  return mf;
}

}  // namespace detail

/// Mean field solution with phase selection by |b| < gamma v and T < Tc(|b|/gamma).
inline MeanFieldSolution gap_solve(const ModelParams& p) {
  p.validate();
  if (!(p.T > 0.0)) throw DomainError("gap_solve requires T > 0");
  const double beta = p.beta();
  MeanFieldSolution mf;
  const bool can_deform = p.gamma > 0.0 && std::abs(p.b) < p.gamma * p.v;
  const double bp = can_deform ? std::abs(p.b) / p.gamma : 0.0;
  mf.tc = can_deform ? critical_temperature(bp, p.v) : 0.0;
  if (can_deform && p.T < mf.tc) {
    mf.phase = Phase::deformed;
    mf.lambda = detail::gap_root(p.v, beta, bp);
    mf.r = std::sqrt(std::max(0.0, mf.lambda * mf.lambda - bp * bp));
    mf.z = p.b - p.b / p.gamma;
    mf.chi = detail::chi_of(mf.lambda, p.v, beta);
    const double tt = plateau_temperature(p);
    if (p.T <= tt) {
      const double bc = p.gamma * p.v * (1.0 - 1.0 / p.n);
      mf.b_star = bc - p.gamma * p.v * std::sqrt(1.0 - p.T / tt) / p.n;
      mf.applicable = std::abs(p.b) <= mf.b_star;
    }
    return mf;
  }
  const double tc = mf.tc;
  mf = detail::normal_solution(p);
  mf.tc = tc;
  return mf;
}

namespace detail {

inline double deformed_logZ(const ModelParams& p, const MeanFieldSolution& mf, Tier mode) {
  const double beta = p.beta();
  const double l = mf.lambda;
  double lz = -(p.n * beta / (4.0 * p.v)) * (l * l - p.b * p.b / p.gamma) +
              p.n * numerics::log_2cosh(0.5 * beta * l) - beta * p.e0();
  if (mode == Tier::mfa) return lz;
  if (!(mf.chi < 1.0)) throw BreakdownError("deformed phase with chi >= 1", mf.r, mf.z);
  lz += numerics::log_sinh(0.5 * beta * l) +
        0.5 * std::log(4.0 * std::numbers::pi * p.n / (beta * p.v * (1.0 - mf.chi))) -
        0.5 * std::log(p.gamma);
  return lz;
}

inline double normal_logZ(const ModelParams& p, const MeanFieldSolution& mf, Tier mode) {
  const double beta = p.beta();
  const double l = mf.lambda;
  double lz = p.n * numerics::log_2cosh(0.5 * beta * l) - beta * p.e0();
  if (p.gamma < 1.0) lz -= (p.n * beta / (4.0 * p.v)) * mf.z * mf.z / (1.0 - p.gamma);
  if (mode == Tier::mfa) return lz;
  const double t = std::tanh(0.5 * beta * l);
  const double omega = l - p.v * t;
  const double transverse = 1.0 - p.v * numerics::tanh_over(l, beta);
  const double longitudinal = 1.0 - (1.0 - p.gamma) * mf.chi;
  if (!(transverse > 0.0) || !(longitudinal > 0.0))
    throw BreakdownError("normal-phase static fluctuations are unstable", 0.0, mf.z);
  lz += numerics::log_sinhc(l * l, beta) - numerics::log_sinhc(omega * omega, beta) -
        std::log(transverse) - 0.5 * std::log(longitudinal);
  return lz;
}

}  // namespace detail

/// ln Z in the cmfa or mfa mode.
inline double cmfa_logZ(const ModelParams& p, Tier mode = Tier::cmfa) {
  if (mode != Tier::cmfa && mode != Tier::mfa) throw DomainError("cmfa_logZ mode must be cmfa or mfa");
  const auto mf = gap_solve(p);
  return mf.phase == Phase::deformed ? detail::deformed_logZ(p, mf, mode)
                                     : detail::normal_logZ(p, mf, mode);
}

/// ln Z(T_c (1 + delta)) - ln Z(T_c (1 - delta)) at the given b. The two
/// branches do not join: the normal-phase fluctuation factor grows like
/// ln(1/delta) while the deformed side stays finite.
inline double critical_jump(const ModelParams& p, double delta = 1e-3, Tier mode = Tier::cmfa) {
  p.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("critical_jump requires 0 < delta < 1");
  const double tc = gap_solve(p.with_T(p.v)).tc;
  if (!(tc > 0.0)) throw NotApplicable("no deformed phase at this field");
  return cmfa_logZ(p.with_T(tc * (1.0 + delta)), mode) - cmfa_logZ(p.with_T(tc * (1.0 - delta)), mode);
}

/// Result of a CMFA/MFA evaluation at one point.
struct CmfaEvaluation {
  MeanFieldSolution mf;
  CollectiveMoments moments;
  Status status = Status::ok;
};

namespace detail {

// Moments of the phase-averaged product state with single-spin polarization m:
// <S_z> = n m_z, <S_z^2> = n/4 + n(n-1) m_z^2, <S^2> = 3n/4 + n(n-1)|m|^2.
inline CollectiveMoments product_moments(int n, double mz, double m2) {
  CollectiveMoments m;
  m.sz = n * mz;
  m.sz2 = 0.25 * n + double(n) * (n - 1) * mz * mz;
  m.s2 = 0.75 * n + double(n) * (n - 1) * m2;
  return m;
}

}  // namespace detail

inline CmfaEvaluation cmfa_evaluate(const ModelParams& p, Tier mode = Tier::cmfa) {
  if (mode != Tier::cmfa && mode != Tier::mfa) throw DomainError("cmfa mode must be cmfa or mfa");
  CmfaEvaluation ev;
  ev.mf = gap_solve(p);
  const auto& mf = ev.mf;
  const double beta = p.beta();

  if (mode == Tier::mfa) {
    const double t = std::tanh(0.5 * beta * mf.lambda);
    const double u = p.b - mf.z;  // longitudinal component of the effective field
    const double mz = mf.lambda > 0.0 ? -0.5 * t * u / mf.lambda : 0.0;
    ev.moments = detail::product_moments(p.n, mz, 0.25 * t * t);
    ev.moments.logZ = cmfa_logZ(p, Tier::mfa);
    return ev;
  }

  if (mf.phase == Phase::normal) {
    auto lz = [](const ModelParams& q) {
      return detail::normal_logZ(q, detail::normal_solution(q), Tier::cmfa);
    };
    ev.moments = moments_from_logZ(lz, p);
    return ev;
  }
  if (!mf.applicable) {
    ev.status = Status::not_applicable;
    ev.moments.logZ = detail::deformed_logZ(p, mf, Tier::cmfa);
    return ev;
  }
  const double n = p.n;
  const double gv = p.gamma * p.v;
  ev.moments.logZ = detail::deformed_logZ(p, mf, Tier::cmfa);
  ev.moments.sz = -n * p.b / (2.0 * gv);
  ev.moments.sz2 = ev.moments.sz * ev.moments.sz + n * p.T / (2.0 * gv);
  const double chi = mf.chi;
  const double h = n * mf.lambda / (2.0 * p.v);
  ev.moments.s2 = h * h + 0.5 * n * (1.0 - chi * (2.0 - (1.0 + chi) * p.T / p.v)) /
                              ((1.0 - chi) * (1.0 - chi));
  return ev;
}

/// Moments; throws NotApplicable beyond the b* edge.
inline CollectiveMoments cmfa_moments(const ModelParams& p, Tier mode = Tier::cmfa) {
  const auto ev = cmfa_evaluate(p, mode);
  if (ev.status == Status::not_applicable)
    throw NotApplicable("CMFA not applicable for |b| > b* at T <= gamma v/(2n)");
  return ev.moments;
}

/// Concurrence at the cmfa or mfa level. In the normal phase the CMFA
/// concurrence is zero.
inline ConcurrenceResult cmfa_concurrence(const ModelParams& p, Tier mode = Tier::cmfa) {
  ConcurrenceResult r;
  r.tier = mode;
  const auto ev = cmfa_evaluate(p, mode);
  if (ev.status != Status::ok) {
    r.status = ev.status;
    return r;
  }
  if (mode == Tier::cmfa && ev.mf.phase == Phase::normal) return r;
  r = concurrence(pair_state(ev.moments, p.n), p.n, mode);
  return r;
}

/// Large-n, low-T asymptotics of the CMFA concurrence and limit curves.
struct CmfaAsymptotics {
  Status status = Status::ok;
  double c_large_n = 0.0;       // (1/n)[1 - 2n e^{-beta v} - (2T/gamma v)/(1 - b^2/(gamma v)^2)]_+
  double b_limit = 0.0;         // gamma v sqrt(1 - (2T/gamma v)/(1 - 2n e^{-beta v}))
  double t_limit_edge = 0.0;    // (gamma v/2)(1 - b^2/(gamma v)^2), near |b| = gamma v
  double t_limit_log = 0.0;     // (v/ln 2n)[1 - (2/gamma)/((ln 2n)^2 (1 - b^2/(gamma v)^2))]
  double n_threshold = 0.0;     // 1/2 e^{beta v}(1 - 2T/(gamma v))
};

inline CmfaAsymptotics cmfa_asymptotics(const ModelParams& p) {
  p.validate();
  CmfaAsymptotics a;
  if (!(p.T > 0.0) || p.gamma <= 0.0) {
    a.status = Status::not_applicable;
    return a;
  }
  const auto mf = gap_solve(p);
  if (mf.phase != Phase::deformed || p.T > 0.5 * mf.tc) {
    a.status = Status::not_applicable;
    return a;
  }
  const double gv = p.gamma * p.v;
  const double q = 1.0 - (p.b / gv) * (p.b / gv);
  const double ex = 2.0 * p.n * std::exp(-p.v / p.T);
  a.c_large_n = std::max(0.0, (1.0 - ex - (2.0 * p.T / gv) / q) / p.n);
  const double inner = 1.0 - (2.0 * p.T / gv) / (1.0 - ex);
  a.b_limit = ex < 1.0 && inner > 0.0 ? gv * std::sqrt(inner) : 0.0;
  a.t_limit_edge = 0.5 * gv * q;
  const double l2n = std::log(2.0 * p.n);
  a.t_limit_log = (p.v / l2n) * (1.0 - (2.0 / p.gamma) / (l2n * l2n * q));
  a.n_threshold = 0.5 * std::exp(p.v / p.T) * (1.0 - 2.0 * p.T / gv);
  return a;
}

}  // namespace xxzent

#pragma once

// Exact thermodynamics of the collective spectrum and the two-spin reduced
// state. Every quantity is a direct Boltzmann sum over (S, M) levels weighted
// by the multiplet count Y(S); no derivatives of Z are taken here.

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "common.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace xxzent {

/// <S_z>, <S_z^2>, <S^2> and ln Z. These fully determine the pair state.
struct CollectiveMoments {
  double sz = 0.0;
  double sz2 = 0.0;
  double s2 = 0.0;
  double logZ = std::numeric_limits<double>::quiet_NaN();
};

/// Symmetric two-spin reduced density in the s^z_i s^z_j basis:
///   diag(p_plus, p, p, p_minus) with off-diagonal alpha between the two
///   antiparallel states.
struct PairState {
  double p_plus = 0.0;
  double p = 0.0;
  double p_minus = 0.0;
  double alpha = 0.0;
};

struct ConcurrenceResult {
  double concurrence = 0.0;
  double eof = 0.0;
  bool entangled = false;
  Tier tier = Tier::exact;
  Status status = Status::ok;
};

/// Pair state plus the sign-carrying quantity log|alpha| - log sqrt(p+ p-),
/// which stays finite where the linear concurrence underflows.
struct ExactState {
  CollectiveMoments moments;
  PairState pair;
  double log_ratio = 0.0;
};

inline constexpr double kEntangledThreshold = 1e-14;
/// Concurrence resolution of the approximate tiers: their pair states come
/// from moments of size n^2/4 and lose about this much to roundoff.
inline constexpr double kApproxResolution = 1e-12;
inline constexpr double kPsdTolerance = 1e-12;

namespace detail {

// Per-level pair-state numerators over 4 n (n - 1), exact small integers.
//   p_plus(M)  = k_up (k_up - 1) / (n (n - 1)),   k_up = n/2 + M
//   p_minus(M) = k_dn (k_dn - 1) / (n (n - 1))
//   alpha(S,M) = (S(S+1) - M^2 - n/2) / (n (n - 1))
inline double num_p_plus(int n, int twoM) { return double(n + twoM) * double(n + twoM - 2); }
inline double num_p_minus(int n, int twoM) { return double(n - twoM) * double(n - twoM - 2); }
inline double num_alpha(int n, int twoS, int twoM) {
  return double(twoS) * double(twoS + 2) - double(twoM) * double(twoM) - 2.0 * n;
}

inline double ratio_from_logs(double log_abs_alpha, double log_pp, double log_pm) {
  if (log_abs_alpha == -numerics::inf) return -numerics::inf;
  return log_abs_alpha - 0.5 * (log_pp + log_pm);
}

}  // namespace detail

/// Two-spin reduced state from the collective moments.
inline PairState pair_state(const CollectiveMoments& m, int n) {
  const double nn1 = double(n) * (n - 1);
  PairState ps;
  const double common = (m.sz2 - 0.25 * n) / nn1 + 0.25;
  ps.p_plus = common + m.sz / n;
  ps.p_minus = common - m.sz / n;
  ps.alpha = (m.s2 - m.sz2 - 0.5 * n) / nn1;
  ps.p = 0.5 * (1.0 - ps.p_plus - ps.p_minus);
  const double lowest = std::min({ps.p_plus, ps.p_minus, ps.p - std::abs(ps.alpha)});
  if (lowest < -kPsdTolerance) {
    throw InconsistentMoments("moments give a non-positive pair state (min eigenvalue " +
                              std::to_string(lowest) + ")");
  }
  return ps;
}

/// Entanglement of formation from the concurrence.
inline double entanglement_of_formation(double c) {
  if (c <= 0.0) return 0.0;
  const double root = std::sqrt(std::max(0.0, 1.0 - c * c));
  double e = 0.0;
  for (double q : {0.5 * (1.0 + root), 0.5 * (1.0 - root)}) {
    if (q > 0.0) e -= q * std::log2(q);
  }
  return e;
}

/// C = 2 [|alpha| - sqrt(p+ p-)]_+ for the symmetric X-shaped pair state.
inline ConcurrenceResult concurrence(const PairState& ps, int n, Tier tier = Tier::exact) {
  (void)n;
  ConcurrenceResult r;
  r.tier = tier;
  const double prod = std::max(ps.p_plus, 0.0) * std::max(ps.p_minus, 0.0);
  r.concurrence = std::max(2.0 * (std::abs(ps.alpha) - std::sqrt(prod)), 0.0);
  if (tier != Tier::exact && r.concurrence <= kApproxResolution) r.concurrence = 0.0;
  r.eof = entanglement_of_formation(r.concurrence);
  r.entangled = r.concurrence > kEntangledThreshold;
  return r;
}

/// Full exact thermal state at T > 0.
inline ExactState exact_state(const ModelParams& p) {
  p.validate();
  if (!(p.T > 0.0)) throw DomainError("exact_state requires T > 0; use ground_state_moments");
  const int n = p.n;
  const double beta = p.beta();

  // Pass 1: largest log-weight.
  double max_lw = -numerics::inf;
  for (int twoS = n % 2; twoS <= n; twoS += 2) {
    const double lY = log_multiplicity(n, HalfInt{twoS});
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      const double lw = lY - beta * level_energy(p, HalfInt{twoS}, HalfInt{twoM});
      max_lw = std::max(max_lw, lw);
    }
  }

  // Pass 2: linear sums relative to the largest weight.
  double z = 0.0, sm = 0.0, sm2 = 0.0, ss = 0.0;
  double pp = 0.0, pm = 0.0, al = 0.0;
  for (int twoS = n % 2; twoS <= n; twoS += 2) {
    const double lY = log_multiplicity(n, HalfInt{twoS});
    const double s = 0.5 * twoS;
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      const double lw = lY - beta * level_energy(p, HalfInt{twoS}, HalfInt{twoM});
      const double w = std::exp(lw - max_lw);
      if (w == 0.0) continue;
      const double m = 0.5 * twoM;
      z += w;
      sm += w * m;
      sm2 += w * m * m;
      ss += w * s * (s + 1.0);
      pp += w * detail::num_p_plus(n, twoM);
      pm += w * detail::num_p_minus(n, twoM);
      al += w * detail::num_alpha(n, twoS, twoM);
    }
  }

  ExactState out;
  out.moments.logZ = max_lw + std::log(z);
  out.moments.sz = sm / z;
  out.moments.sz2 = sm2 / z;
  out.moments.s2 = ss / z;

  const double denom = 4.0 * n * (n - 1.0);
  out.pair.p_plus = pp / z / denom;
  out.pair.p_minus = pm / z / denom;
  out.pair.alpha = al / z / denom;
  out.pair.p = 0.5 * (1.0 - out.pair.p_plus - out.pair.p_minus);

  // Below ~1e-200 of the dominant weight the linear sums may have lost terms to
  // underflow; redo the pair elements in the log domain.
  constexpr double kUnderflowGuard = 1e-200;
  const bool need_log = pp < kUnderflowGuard * z || pm < kUnderflowGuard * z ||
                        std::abs(al) < kUnderflowGuard * z;
  if (!need_log) {
    out.log_ratio = detail::ratio_from_logs(std::log(std::abs(out.pair.alpha)),
                                            std::log(out.pair.p_plus),
                                            std::log(out.pair.p_minus));
    return out;
  }

  numerics::LogAccumulator lpp, lpm, lap, lan;
  for (int twoS = n % 2; twoS <= n; twoS += 2) {
    const double lY = log_multiplicity(n, HalfInt{twoS});
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      const double lw = lY - beta * level_energy(p, HalfInt{twoS}, HalfInt{twoM});
      const double a = detail::num_p_plus(n, twoM);
      const double c = detail::num_p_minus(n, twoM);
      const double d = detail::num_alpha(n, twoS, twoM);
      if (a > 0.0) lpp.add(lw + std::log(a));
      if (c > 0.0) lpm.add(lw + std::log(c));
      if (d > 0.0) lap.add(lw + std::log(d));
      if (d < 0.0) lan.add(lw + std::log(-d));
    }
  }
  const double log_norm = out.moments.logZ + std::log(denom);
  const double log_pp = lpp.log() - log_norm;
  const double log_pm = lpm.log() - log_norm;
  double log_abs_alpha = -numerics::inf;
  double sign = 1.0;
  if (lap.log() > lan.log()) {
    log_abs_alpha = numerics::log_diff_exp(lap.log(), lan.log()) - log_norm;
  } else if (lan.log() > lap.log()) {
    log_abs_alpha = numerics::log_diff_exp(lan.log(), lap.log()) - log_norm;
    sign = -1.0;
  }
  out.pair.p_plus = std::exp(log_pp);
  out.pair.p_minus = std::exp(log_pm);
  out.pair.alpha = sign * std::exp(log_abs_alpha);
  out.pair.p = 0.5 * (1.0 - out.pair.p_plus - out.pair.p_minus);
  out.log_ratio = detail::ratio_from_logs(log_abs_alpha, log_pp, log_pm);
  return out;
}

inline CollectiveMoments exact_moments(const ModelParams& p) { return exact_state(p).moments; }

/// T = 0 state: uniform mixture over all degenerate ground levels (a single
/// level away from the crossing fields, two levels exactly at a crossing).
inline ExactState ground_state(const ModelParams& p) {
  p.validate();
  const int n = p.n;
  double e_min = numerics::inf;
  for (int twoS = n % 2; twoS <= n; twoS += 2)
    for (int twoM = -twoS; twoM <= twoS; twoM += 2)
      e_min = std::min(e_min, level_energy(p, HalfInt{twoS}, HalfInt{twoM}));

  const double tol = 1e-11 * (p.v + std::abs(p.b)) * n;
  double w_tot = 0.0, sm = 0.0, sm2 = 0.0, ss = 0.0, pp = 0.0, pm = 0.0, al = 0.0;
  for (int twoS = n % 2; twoS <= n; twoS += 2) {
    const double s = 0.5 * twoS;
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      if (level_energy(p, HalfInt{twoS}, HalfInt{twoM}) - e_min > tol) continue;
      const double w = std::exp(log_multiplicity(n, HalfInt{twoS}));
      const double m = 0.5 * twoM;
      w_tot += w;
      sm += w * m;
      sm2 += w * m * m;
      ss += w * s * (s + 1.0);
      pp += w * detail::num_p_plus(n, twoM);
      pm += w * detail::num_p_minus(n, twoM);
      al += w * detail::num_alpha(n, twoS, twoM);
    }
  }
  ExactState out;
  out.moments = {sm / w_tot, sm2 / w_tot, ss / w_tot, -numerics::inf};
  const double denom = 4.0 * n * (n - 1.0) * w_tot;
  out.pair = {pp / denom, 0.0, pm / denom, al / denom};
  out.pair.p = 0.5 * (1.0 - out.pair.p_plus - out.pair.p_minus);
  out.log_ratio = detail::ratio_from_logs(std::log(std::abs(out.pair.alpha)),
                                          std::log(out.pair.p_plus),
                                          std::log(out.pair.p_minus));
  return out;
}

inline CollectiveMoments ground_state_moments(const ModelParams& p) {
  return ground_state(p).moments;
}

/// Exact concurrence at any T >= 0 (T = 0 takes the ground-state path).
inline ConcurrenceResult exact_concurrence(const ModelParams& p) {
  const ExactState s = p.T > 0.0 ? exact_state(p) : ground_state(p);
  return concurrence(s.pair, p.n, Tier::exact);
}

/// Low-temperature concurrence far above the critical field, keeping only the
/// states with at most two spins flipped against the field:
///   C ~ (2 e^{-beta(|b|-b_c)}/n)[1 - e^{-beta v} - sqrt(2 n eta/(n-1)) e^{-beta gamma v/n}]_+
/// Requires |b| - b_c > 5 T, otherwise the status is not-applicable.
/// eta = 1 + (n-1) e^{-beta v} + n(n-3)/2 e^{-2 beta v(1-1/n)} is the relative
/// weight of the two-flip states.
inline double large_field_bracket(int n, double v, double gamma, double T) {
  const double beta = 1.0 / T;
  const double ev = std::exp(-beta * v);
  const double eta = 1.0 + (n - 1.0) * ev +
                     0.5 * n * (n - 3.0) * std::exp(-2.0 * beta * v * (1.0 - 1.0 / n));
  return 1.0 - ev - std::sqrt(2.0 * n * std::max(eta, 0.0) / (n - 1.0)) *
                        std::exp(-beta * gamma * v / n);
}

inline ConcurrenceResult large_field_expansion(const ModelParams& p) {
  p.validate();
  ConcurrenceResult r;
  r.tier = Tier::exact;
  const double bc = p.gamma * p.v * (1.0 - 1.0 / p.n);
  if (!(p.T > 0.0) || std::abs(p.b) - bc <= 5.0 * p.T) {
    r.status = Status::not_applicable;
    return r;
  }
  const double bracket = large_field_bracket(p.n, p.v, p.gamma, p.T);
  r.concurrence =
      std::max(0.0, 2.0 * std::exp(-(std::abs(p.b) - bc) / p.T) / p.n * bracket);
  r.eof = entanglement_of_formation(r.concurrence);
  r.entangled = r.concurrence > 0.0;
  return r;
}

/// Field-independent limit temperature for |b| >> b_c: the root of the
/// large-field bracket. Scans upward from low T and refines the first
/// sign change. Returns 0 when the bracket is never positive.
inline double large_field_limit_temperature(int n, double v, double gamma) {
  if (gamma <= 0.0) return 0.0;
  const auto grid = numerics::logspace(1e-4 * v, 10.0 * v, 400);
  double prev = grid.front();
  if (large_field_bracket(n, v, gamma, prev) <= 0.0) return 0.0;
  for (double t : grid) {
    if (large_field_bracket(n, v, gamma, t) <= 0.0) {
      return numerics::bisect([&](double x) { return large_field_bracket(n, v, gamma, x); },
                              prev, t, 1e-14 * v);
    }
    prev = t;
  }
  return grid.back();
}

/// eta ~ 1 estimate 2 gamma v / (n ln[2n/(n-1)]).
inline double large_field_limit_temperature_approx(int n, double v, double gamma) {
  return 2.0 * gamma * v / (n * std::log(2.0 * n / (n - 1.0)));
}

/// Ground-state concurrence for S = n/2, M = m n, to O((n-1)^-2):
///   C ~ 1/(n-1) + [4 m^2/(1 - 4 m^2)]/(n-1)^2.
inline double zero_T_concurrence_approx(int n, double m) {
  if (!(std::abs(m) < 0.5 - 1.0 / n))
    throw DomainError("expansion requires |m| < 1/2 - 1/n");
  const double q = 4.0 * m * m;
  return 1.0 / (n - 1.0) + q / (1.0 - q) / ((n - 1.0) * (n - 1.0));
}

}  // namespace xxzent

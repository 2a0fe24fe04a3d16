#pragma once

// Static path + RPA (CSPA) partition function of the collective XXZ model.
//
//   gamma = 1:  Z = (n beta/2v) int_0^inf r dr e^{-n beta r^2/4v} Z(lambda) C_RPA
//   gamma < 1:  Z = 1/4 sqrt(n^3 beta^3/(pi v^3 (1-gamma)))
//                   int r dr dz e^{-(n beta/4v)(r^2 + z^2/(1-gamma))} Z(lambda) C_RPA
//
// with lambda = sqrt((b - z)^2 + r^2), Z(lambda) = e^{-beta E0}(2 cosh(beta lambda/2))^n,
// C_RPA = F(lambda^2)/F(omega^2), F(s) = sinh(beta sqrt(s)/2)/sqrt(s) and
//   omega^2 = (lambda - v t)(lambda - v(1 - gamma r^2/lambda^2) t),  t = tanh(beta lambda/2).
// Everything is kept in the log domain and normalized by the peak of the
// integrand. The spa mode sets C_RPA = 1.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cmfa.hpp"
#include "common.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "quadrature.hpp"

namespace xxzent {

struct CspaEvaluation {
  double logZ = std::numeric_limits<double>::quiet_NaN();
  double breakdown_T = std::numeric_limits<double>::quiet_NaN();
  Tier mode = Tier::cspa;
  double quadrature_error = std::numeric_limits<double>::quiet_NaN();  // absolute, on ln Z
  Status status = Status::ok;
  bool has_moments = false;
  CollectiveMoments moments;
  double r_break = std::numeric_limits<double>::quiet_NaN();
  double z_break = std::numeric_limits<double>::quiet_NaN();
  std::string message;
};

struct CspaOptions {
  bool moments = true;
  bool breakdown_temperature = false;
};

inline constexpr double kCspaWindow = 40.0;           // log units kept below the peak
inline constexpr double kCspaQuadratureBudget = 1e-8;  // on ln Z

namespace detail {

inline double cspa_omega2(const ModelParams& p, double r, double z) {
  const double u = p.b - z;
  const double l2 = u * u + r * r;
  const double tau = numerics::tanh_over(std::sqrt(l2), p.beta());
  return (1.0 - p.v * tau) * (l2 - p.v * tau * (l2 - p.gamma * r * r));
}

// ln C_RPA at (r, z); NaN where omega^2 <= -(2 pi T)^2.
inline double cspa_log_crpa(const ModelParams& p, double r, double z) {
  const double u = p.b - z;
  const double l2 = u * u + r * r;
  const double beta = p.beta();
  return numerics::log_sinhc(l2, beta) - numerics::log_sinhc(cspa_omega2(p, r, z), beta);
}

inline bool two_dimensional(const ModelParams& p) { return p.gamma < 1.0; }

// ln of everything in the integrand except the measure factor r and ln C_RPA.
inline double cspa_log_base(const ModelParams& p, double r, double z) {
  const double beta = p.beta();
  const double u = p.b - z;
  const double l = std::sqrt(u * u + r * r);
  double g = r * r;
  if (two_dimensional(p)) g += z * z / (1.0 - p.gamma);
  return -(p.n * beta / (4.0 * p.v)) * g + p.n * numerics::log_2cosh(0.5 * beta * l) - beta * p.e0();
}

inline double cspa_log_prefactor(const ModelParams& p) {
  const double nb = p.n * p.beta();
  if (!two_dimensional(p)) return std::log(nb / (2.0 * p.v));
  return std::log(0.25) + 0.5 * std::log(nb * nb * nb / (std::numbers::pi * p.v * p.v * p.v * (1.0 - p.gamma)));
}

// d/dv of the log prefactor.
inline double cspa_prefactor_dv(const ModelParams& p) {
  return two_dimensional(p) ? -1.5 / p.v : -1.0 / p.v;
}

struct CspaWindow {
  double r_max = 0.0;
  double z_lo = 0.0, z_hi = 0.0;
  double log_peak = -numerics::inf;
  double r_peak = 0.0;
};

struct BreakdownPoint {
  bool found = false;
  double r = 0.0, z = 0.0;
  double margin = numerics::inf;  // min of omega^2 + (2 pi T)^2
};

// Global scan of omega^2 + (2 pi T)^2 over the region lambda < v, the only
// place where omega^2 can be negative: r in (0, v], z in [b - v, b + v].
inline BreakdownPoint scan_breakdown(const ModelParams& p) {
  BreakdownPoint bp;
  const double w1 = std::pow(2.0 * std::numbers::pi * p.T, 2);
  const int nr = 256;
  const int nz = two_dimensional(p) ? 64 : 1;
  auto margin = [&](double r, double z) { return cspa_omega2(p, r, z) + w1; };
  double br = 0.0, bz = 0.0;
  for (int j = 0; j < nz; ++j) {
    const double z = nz == 1 ? 0.0 : p.b - p.v + 2.0 * p.v * j / (nz - 1);
    for (int i = 1; i <= nr; ++i) {
      const double r = p.v * i / nr;
      const double m = margin(r, z);
      if (m < bp.margin) {
        bp.margin = m;
        br = r;
        bz = z;
      }
    }
  }
  // Golden-section polish of the best cell, alternating r and z.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto golden = [&](auto f, double a, double b) {
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    return 0.5 * (a + b);
  };
  const double dr = p.v / nr;
  const double dz = nz == 1 ? 0.0 : 2.0 * p.v / (nz - 1);
  for (int round = 0; round < 2; ++round) {
    br = golden([&](double r) { return margin(r, bz); }, std::max(1e-12, br - dr), std::min(p.v, br + dr));
    if (nz > 1) bz = golden([&](double z) { return margin(br, z); }, bz - dz, bz + dz);
  }
  bp.margin = std::min(bp.margin, margin(br, bz));
  bp.r = br;
  bp.z = bz;
  bp.found = !(bp.margin > 0.0) || std::isnan(cspa_log_crpa(p, br, bz));
  return bp;
}

inline CspaWindow find_window(const ModelParams& p) {
  const double W = kCspaWindow;
  const bool two_d = two_dimensional(p);
  CspaWindow w;
  const double spread = std::sqrt(4.0 * p.v * (W + std::log(double(p.n))) * p.T / p.n);
  w.r_max = p.v + spread;
  double zc = 0.0;
  if (two_d) {
    zc = gap_solve(p).z;
    const double zs = std::sqrt(1.0 - p.gamma) * spread + 1e-3 * p.v;
    w.z_lo = zc - zs;
    w.z_hi = zc + zs;
  }
  const int nr = 256;
  const int nz = two_d ? 64 : 1;
  auto L = [&](double r, double z) { return std::log(r) + cspa_log_base(p, r, z); };
  for (int iter = 0; iter < 60; ++iter) {
    double lmax = -numerics::inf, edge_r = -numerics::inf, edge_lo = -numerics::inf,
           edge_hi = -numerics::inf, rpk = 0.0;
    for (int j = 0; j < nz; ++j) {
      const double z = nz == 1 ? 0.0 : w.z_lo + (w.z_hi - w.z_lo) * j / (nz - 1);
      for (int i = 1; i <= nr; ++i) {
        const double r = w.r_max * i / nr;
        const double l = L(r, z);
        if (l > lmax) {
          lmax = l;
          rpk = r;
        }
        if (i == nr) edge_r = std::max(edge_r, l);
        if (j == 0) edge_lo = std::max(edge_lo, l);
        if (j == nz - 1) edge_hi = std::max(edge_hi, l);
      }
    }
    w.log_peak = lmax;
    w.r_peak = rpk;
    bool grown = false;
    if (edge_r > lmax - W) {
      w.r_max *= 1.5;
      grown = true;
    }
    if (two_d) {
      if (edge_lo > lmax - W) {
        w.z_lo = zc - 1.5 * (zc - w.z_lo);
        grown = true;
      }
      if (edge_hi > lmax - W) {
        w.z_hi = zc + 1.5 * (w.z_hi - zc);
        grown = true;
      }
    }
    if (!grown) break;
  }
  return w;
}

// First and second b-derivatives and the v-derivative of ln C_RPA at fixed
// (r, z), fourth-order central differences.
struct CrpaDerivatives {
  double value, db, dbb, dv;
};

inline CrpaDerivatives crpa_derivatives(const ModelParams& p, double r, double z) {
  const double h = 1e-3 * std::min(p.v, 10.0 * p.T);
  auto fb = [&](double b) {
    const double v = cspa_log_crpa(p.with_b(b), r, z);
    if (std::isnan(v)) throw BreakdownError("C_RPA breakdown inside a derivative stencil", r, z);
    return v;
  };
  auto fv = [&](double v) {
    const double c = cspa_log_crpa(p.with_v(v), r, z);
    if (std::isnan(c)) throw BreakdownError("C_RPA breakdown inside a derivative stencil", r, z);
    return c;
  };
  const double c0 = fb(p.b);
  const double bp1 = fb(p.b + h), bm1 = fb(p.b - h), bp2 = fb(p.b + 2 * h), bm2 = fb(p.b - 2 * h);
  const double vp1 = fv(p.v + h), vm1 = fv(p.v - h), vp2 = fv(p.v + 2 * h), vm2 = fv(p.v - 2 * h);
  return {c0, (8.0 * (bp1 - bm1) - (bp2 - bm2)) / (12.0 * h),
          (-bp2 + 16.0 * bp1 - 30.0 * c0 + 16.0 * bm1 - bm2) / (12.0 * h * h),
          (8.0 * (vp1 - vm1) - (vp2 - vm2)) / (12.0 * h)};
}

// Integrand components at (r, z), normalized by the window peak.
//   K = 1: weight only
//   K = 4, cspa: weight x {1, L_b, L_bb + L_b^2, L_v}
//   K = 4, spa : weight x {1, m_z, m_z^2, |m|^2}   (product-state mixture)
template <std::size_t K>
std::array<double, K> cspa_integrand(const ModelParams& p, Tier mode, double log_peak, double r, double z) {
  std::array<double, K> out{};
  if (r <= 0.0) return out;
  const double beta = p.beta();
  const double n = p.n;
  double lc = 0.0;
  CrpaDerivatives cd{0.0, 0.0, 0.0, 0.0};
  if (mode == Tier::cspa) {
    if constexpr (K == 1) {
      lc = cspa_log_crpa(p, r, z);
      if (std::isnan(lc)) throw BreakdownError("RPA breakdown at a quadrature node", r, z);
    } else {
      const double chk = cspa_log_crpa(p, r, z);
      if (std::isnan(chk)) throw BreakdownError("RPA breakdown at a quadrature node", r, z);
      cd = crpa_derivatives(p, r, z);
      lc = cd.value;
    }
  }
  const double w = r * std::exp(cspa_log_base(p, r, z) + lc - log_peak);
  out[0] = w;
  if constexpr (K == 4) {
    const double u = p.b - z;
    const double l = std::sqrt(u * u + r * r);
    const double t = std::tanh(0.5 * beta * l);
    const double ul = l > 0.0 ? u / l : 0.0;
    const double rl2 = l > 0.0 ? (r / l) * (r / l) : 0.0;
    if (mode == Tier::spa) {
      const double mz = -0.5 * t * ul;
      out[1] = w * mz;
      out[2] = w * mz * mz;
      out[3] = w * 0.25 * t * t;
    } else {
      const double lb = 0.5 * n * beta * t * ul + cd.db;
      const double lbb = 0.5 * n * beta * (0.5 * beta * (1.0 - t * t) * ul * ul +
                                           numerics::tanh_over(l, beta) * rl2) +
                         cd.dbb;
      double g = r * r;
      if (two_dimensional(p)) g += z * z / (1.0 - p.gamma);
      const double lv = n * beta * g / (4.0 * p.v * p.v) - beta * (3.0 - p.gamma) / 4.0 + cd.dv;
      out[1] = w * lb;
      out[2] = w * (lbb + lb * lb);
      out[3] = w * lv;
    }
  }
  return out;
}

template <std::size_t K>
quadrature::Result<K> cspa_integrate(const ModelParams& p, Tier mode, const CspaWindow& w) {
  // The moment components carry finite-difference noise of about 1e-11
  // relative, so they cannot be pushed as far as the bare weight.
  constexpr double outer_tol = K == 1 ? 1e-10 : 1e-9;
  constexpr double inner_tol = K == 1 ? 1e-12 : 1e-10;
  if (!two_dimensional(p)) {
    auto f = [&](double r) { return cspa_integrand<K>(p, mode, w.log_peak, r, 0.0); };
    return quadrature::integrate<K>(f, 0.0, w.r_max, outer_tol, 0.0, 4000, 16);
  }
  int inner_failures = 0;
  auto inner = [&](double z) {
    auto f = [&](double r) { return cspa_integrand<K>(p, mode, w.log_peak, r, z); };
    const auto res = quadrature::integrate<K>(f, 0.0, w.r_max, inner_tol, 0.0, 2000, 8);
    if (!res.converged) ++inner_failures;
    return res.value;
  };
  auto out = quadrature::integrate<K>(inner, w.z_lo, w.z_hi, outer_tol, 0.0, 2000, 8);
  if (inner_failures > 0) out.converged = false;
  return out;
}

}  // namespace detail

/// Collective RPA energy at static point (r, z); imaginary when omega^2 < 0.
inline std::complex<double> rpa_frequency(const ModelParams& p, double r, double z = 0.0) {
  if (r < 0.0) throw DomainError("rpa_frequency requires r >= 0");
  if (r == 0.0 && p.b == z) throw DomainError("rpa_frequency: vanishing gap (b = z, r = 0)");
  if (!(p.T > 0.0)) throw DomainError("rpa_frequency requires T > 0");
  const double s = detail::cspa_omega2(p, r, z);
  return s >= 0.0 ? std::complex<double>(std::sqrt(s), 0.0) : std::complex<double>(0.0, std::sqrt(-s));
}

/// Breakdown temperature T*: largest T at which some static point has
/// omega^2 <= -(2 pi T)^2, located by bisection on [1e-4 v, v/2]. Zero if
/// the approximation holds down to 1e-4 v.
inline double breakdown_temperature(const ModelParams& p) {
  p.validate();
  auto broken = [&](double t) { return detail::scan_breakdown(p.with_T(t)).found; };
  double lo = 1e-4 * p.v, hi = 0.5 * p.v;
  if (!broken(lo)) return 0.0;
  if (broken(hi)) return hi;
  while (hi - lo > 1e-6 * p.v) {
    const double mid = 0.5 * (lo + hi);
    (broken(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Full evaluation; failures are reported through the status field.
inline CspaEvaluation cspa_evaluate(const ModelParams& p, Tier mode = Tier::cspa, CspaOptions opt = {}) {
  p.validate();
  if (mode != Tier::cspa && mode != Tier::spa) throw DomainError("cspa mode must be cspa or spa");
  if (!(p.T > 0.0)) throw DomainError("CSPA requires T > 0");
  CspaEvaluation ev;
  ev.mode = mode;
  if (opt.breakdown_temperature && mode == Tier::cspa) ev.breakdown_T = breakdown_temperature(p);
  if (mode == Tier::cspa) {
    const auto bp = detail::scan_breakdown(p);
    if (bp.found) {
      ev.status = Status::breakdown;
      ev.r_break = bp.r;
      ev.z_break = bp.z;
      ev.message = "omega^2 <= -(2 pi T)^2 at r=" + std::to_string(bp.r) + " z=" + std::to_string(bp.z);
      return ev;
    }
  }
  const auto w = detail::find_window(p);
  try {
    const double pre = detail::cspa_log_prefactor(p);
    if (opt.moments) {
      const auto res = detail::cspa_integrate<4>(p, mode, w);
      const double i0 = res.value[0];
      ev.logZ = pre + w.log_peak + std::log(i0);
      ev.quadrature_error = res.error[0] / i0;
      auto& m = ev.moments;
      m.logZ = ev.logZ;
      if (mode == Tier::spa) {
        const double n = p.n;
        m.sz = n * res.value[1] / i0;
        m.sz2 = 0.25 * n + n * (n - 1.0) * res.value[2] / i0;
        m.s2 = 0.75 * n + n * (n - 1.0) * res.value[3] / i0;
      } else {
        m.sz = -p.T * res.value[1] / i0;
        m.sz2 = p.T * p.T * res.value[2] / i0;
        m.s2 = p.n * p.T * (res.value[3] / i0 + detail::cspa_prefactor_dv(p)) + p.gamma * m.sz2 +
               0.25 * p.n * (3.0 - p.gamma);
      }
      ev.has_moments = true;
      if (!res.converged) ev.quadrature_error = numerics::inf;
    } else {
      const auto res = detail::cspa_integrate<1>(p, mode, w);
      ev.logZ = pre + w.log_peak + std::log(res.value[0]);
      ev.quadrature_error = res.converged ? res.error[0] / res.value[0] : numerics::inf;
    }
  } catch (const BreakdownError& e) {
    ev.status = Status::breakdown;
    ev.r_break = e.r();
    ev.z_break = e.z();
    ev.message = e.what();
    return ev;
  }
  if (!(ev.quadrature_error < kCspaQuadratureBudget)) {
    ev.status = Status::error;
    ev.message = "quadrature error budget exceeded";
  }
  return ev;
}

/// ln Z_CSPA (or ln Z_SPA); throws on breakdown or quadrature failure.
inline double cspa_logZ(const ModelParams& p, Tier mode = Tier::cspa) {
  const auto ev = cspa_evaluate(p, mode, {.moments = false});
  if (ev.status == Status::breakdown) throw BreakdownError(ev.message, ev.r_break, ev.z_break);
  if (ev.status != Status::ok) throw ConvergenceError(ev.message, ev.quadrature_error);
  return ev.logZ;
}

inline CollectiveMoments cspa_moments(const ModelParams& p, Tier mode = Tier::cspa) {
  const auto ev = cspa_evaluate(p, mode);
  if (ev.status == Status::breakdown)
    throw BreakdownError(ev.message + " (use the spa mode below the breakdown temperature)", ev.r_break,
                         ev.z_break);
  if (ev.status != Status::ok) throw ConvergenceError(ev.message, ev.quadrature_error);
  return ev.moments;
}

}  // namespace xxzent

#pragma once

// The collective XXZ model written in the form H = H0 - 1/2 sum_nu v_nu (Q^nu)^2:
//   Q = (S_x, S_y, S_z), v_x = v_y = 2v/n, v_z = 2v(1 - gamma)/n,
//   H0 = b S_z + E0,
// so that every site is a spin-1/2 with h(x) = b s_z + E0/n - x.s.
// The z channel is dropped at gamma = 1, where v_z vanishes.

#include <cmath>
#include <numbers>

#include "model.hpp"
#include "rpa.hpp"

namespace xxzent {

inline rpa::CoupledSystem xxz_system(const ModelParams& p) {
  p.validate();
  using rpa::cplx;
  rpa::Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, cplx(0.0, -0.5), cplx(0.0, 0.5), 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  rpa::LocalSite site;
  site.h0 = p.b * sz + (p.e0() / p.n) * rpa::Matrix::Identity(2, 2);
  site.q_ops = {sx, sy};
  site.count = p.n;
  rpa::CoupledSystem sys;
  sys.couplings = {2.0 * p.v / p.n, 2.0 * p.v / p.n};
  if (p.gamma < 1.0) {
    site.q_ops.push_back(sz);
    sys.couplings.push_back(2.0 * p.v * (1.0 - p.gamma) / p.n);
  }
  sys.sites.push_back(site);
  return sys;
}

/// Static field (x, y[, z]) for a transverse field r along x and shift z.
inline rpa::Vector xxz_static_field(const ModelParams& p, double r, double z) {
  rpa::Vector x = rpa::Vector::Zero(p.gamma < 1.0 ? 3 : 2);
  x(0) = r;
  if (p.gamma < 1.0) x(2) = z;
  return x;
}

/// CMFA log-partition assembled from the generic engine: Hartree minimum,
/// C0 and C_RPA. With one Goldstone direction (rotations about z) the
/// angle is integrated exactly, giving the extra factor r sqrt(2 pi beta/v_perp).
struct EngineCmfa {
  double logZ = 0.0;
  rpa::HartreeSolution hartree;
  rpa::StaticFluctuation fluctuation;
  rpa::RpaSpectrum spectrum;
  double r = 0.0;
};

inline EngineCmfa engine_cmfa(const ModelParams& p, const rpa::Vector& guess = {}) {
  const auto sys = xxz_system(p);
  EngineCmfa out;
  out.hartree = rpa::hartree_solve(sys, p.T, guess);
  const auto& cfg = out.hartree.config;
  out.fluctuation = rpa::c0_factor(cfg, sys);
  out.spectrum = rpa::rpa_energies(cfg, sys);
  out.r = std::hypot(cfg.x(0), cfg.x(1));
  out.logZ = -p.beta() * out.hartree.free_energy + out.fluctuation.log_c0 +
             rpa::log_c_rpa(out.spectrum, p.T);
  if (out.fluctuation.goldstone_modes == 1) {
    out.logZ += std::log(out.r) + 0.5 * std::log(2.0 * std::numbers::pi * p.beta() / sys.couplings[0]);
  } else if (out.fluctuation.goldstone_modes > 1) {
    throw DomainError("more than one Goldstone direction in the XXZ static problem");
  }
  return out;
}

}  // namespace xxzent

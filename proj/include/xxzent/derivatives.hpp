#pragma once

// Collective moments from derivatives of ln Z(b, v):
//   <S_z>   = -T d lnZ/db
//   <S_z^2> = T^2 d^2 lnZ/db^2 + <S_z>^2
//   <S^2>   = n T d lnZ/dv + gamma <S_z^2> + n (3 - gamma)/4
// The v-route for <S^2> is exact for any gamma since dH/dv = -(1/n)[S^2 -
// gamma S_z^2] + (3 - gamma)/4.

#include <algorithm>
#include <cmath>

#include "exact.hpp"
#include "model.hpp"

namespace xxzent {

struct DerivativeSteps {
  double b = 1e-4;  // relative to max(v, |b|)
  double b2 = 1e-3;
  double v = 1e-4;  // relative to v
};

/// Fourth-order central differences of a log-partition function.
template <class LogZ>
CollectiveMoments moments_from_logZ(LogZ&& log_z, const ModelParams& p, DerivativeSteps steps = {}) {
  const double sb = std::max(p.v, std::abs(p.b));
  const double hb = steps.b * sb;
  const double hb2 = steps.b2 * sb;
  const double hv = steps.v * p.v;
  auto fb = [&](double x) { return log_z(p.with_b(x)); };
  auto fv = [&](double x) { return log_z(p.with_v(x)); };

  const double l0 = log_z(p);
  const double d1 = (8.0 * (fb(p.b + hb) - fb(p.b - hb)) - (fb(p.b + 2 * hb) - fb(p.b - 2 * hb))) /
                    (12.0 * hb);
  const double d2 = (-fb(p.b + 2 * hb2) + 16.0 * fb(p.b + hb2) - 30.0 * l0 + 16.0 * fb(p.b - hb2) -
                     fb(p.b - 2 * hb2)) /
                    (12.0 * hb2 * hb2);
  const double dv = (8.0 * (fv(p.v + hv) - fv(p.v - hv)) - (fv(p.v + 2 * hv) - fv(p.v - 2 * hv))) /
                    (12.0 * hv);
  CollectiveMoments m;
  m.logZ = l0;
  m.sz = -p.T * d1;
  m.sz2 = p.T * p.T * d2 + m.sz * m.sz;
  m.s2 = p.n * p.T * dv + p.gamma * m.sz2 + 0.25 * p.n * (3.0 - p.gamma);
  return m;
}

}  // namespace xxzent

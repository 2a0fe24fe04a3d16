#pragma once

// Fully connected XXZ model in a transverse field:
//   H = b S_z - (v/n) [S_x^2 + S_y^2 + (1 - gamma) S_z^2] + E0,
//   E0 = v (3 - gamma) / 4,
// with eigenvalues E_SM = b M - (v/n)[S(S+1) - gamma M^2] + E0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace xxzent {

/// Model parameters. Energies in units of v, temperatures with k = 1.
struct ModelParams {
  int n = 2;
  double v = 1.0;
  double gamma = 1.0;
  double b = 0.0;
  double T = 0.0;

  double coupling() const { return v / n; }  // V = v/n
  double e0() const { return 0.25 * v * (3.0 - gamma); }
  double beta() const { return 1.0 / T; }

  /// Throws DomainError when the parameters leave the supported family.
  void validate() const {
    if (n < 2) throw DomainError("n must be >= 2");
    if (!(v > 0.0)) throw DomainError("only the attractive case v > 0 is supported");
    if (!(gamma <= 1.0)) throw DomainError("gamma must satisfy gamma <= 1");
    if (!std::isfinite(b)) throw DomainError("field b must be finite");
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("temperature must be finite and >= 0");
  }

  ModelParams with_b(double nb) const { auto p = *this; p.b = nb; return p; }
  ModelParams with_T(double nT) const { auto p = *this; p.T = nT; return p; }
  ModelParams with_v(double nv) const { auto p = *this; p.v = nv; return p; }
  ModelParams with_gamma(double g) const { auto p = *this; p.gamma = g; return p; }
  ModelParams with_n(int nn) const { auto p = *this; p.n = nn; return p; }
};

/// One row of the collective spectrum.
struct SpinLevel {
  HalfInt S;
  HalfInt M;
  double energy = 0.0;
  double log_multiplicity = 0.0;
};

namespace detail {

inline bool valid_total_spin(int n, HalfInt S) {
  return S.twice >= n % 2 && S.twice <= n && (n - S.twice) % 2 == 0;
}

inline bool valid_projection(HalfInt S, HalfInt M) {
  return std::abs(M.twice) <= S.twice && (S.twice - M.twice) % 2 == 0;
}

inline void check_level(int n, HalfInt S, HalfInt M) {
  if (!valid_total_spin(n, S))
    throw DomainError("total spin 2S=" + std::to_string(S.twice) +
                      " incompatible with n=" + std::to_string(n));
  if (!valid_projection(S, M))
    throw DomainError("projection 2M=" + std::to_string(M.twice) +
                      " incompatible with 2S=" + std::to_string(S.twice));
}

// Exact binomial coefficient in 128-bit arithmetic (n <= 64 never overflows
// because every intermediate is C(n, i) * (n - i) <= 2^64 * 64).
inline unsigned __int128 binomial_u128(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  return c;
}

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace detail

/// E_SM including the constant E0.
inline double level_energy(const ModelParams& p, HalfInt S, HalfInt M) {
  detail::check_level(p.n, S, M);
  const double s = S.value();
  const double m = M.value();
  return p.b * m - p.coupling() * (s * (s + 1.0) - p.gamma * m * m) + p.e0();
}

/// Number of spin-S multiplets among n spins-1/2, exact for n <= 64.
inline unsigned __int128 multiplicity_exact(int n, HalfInt S) {
  if (n > 64) throw DomainError("exact multiplicity limited to n <= 64; use log_multiplicity");
  if (!detail::valid_total_spin(n, S)) throw DomainError("invalid total spin for n");
  const int k = (n - S.twice) / 2;
  return detail::binomial_u128(n, k) - detail::binomial_u128(n, k - 1);
}

inline std::uint64_t multiplicity(int n, HalfInt S) {
  return static_cast<std::uint64_t>(multiplicity_exact(n, S));
}

/// log Y(S). Uses Y = C(n,k) (2S+1)/(n-k+1), k = n/2 - S, so no difference of
/// large numbers is ever formed.
inline double log_multiplicity(int n, HalfInt S) {
  if (!detail::valid_total_spin(n, S)) throw DomainError("invalid total spin for n");
  const int k = (n - S.twice) / 2;
  if (n <= 64) return std::log(static_cast<double>(multiplicity_exact(n, S)));
  return detail::log_binomial(n, k) + std::log(S.twice + 1.0) - std::log(n - k + 1.0);
}

/// Level-crossing fields of the ground state and the T = 0 limit field.
struct CrossingFields {
  std::vector<double> fields;  // ascending, b_M = gamma v (1 - 2M)/n
  double critical = 0.0;       // b_c = gamma v (1 - 1/n)
  bool aligned = false;        // gamma <= 0: ground state fully aligned for b != 0
};

inline CrossingFields crossing_fields(const ModelParams& p) {
  CrossingFields out;
  if (p.gamma <= 0.0) {
    out.aligned = true;
    return out;
  }
  out.critical = p.gamma * p.v * (1.0 - 1.0 / p.n);
  // M runs from n/2 down to -n/2 + 1; each value crosses into M - 1.
  for (int twoM = p.n; twoM >= -p.n + 2; twoM -= 2) {
    out.fields.push_back(p.gamma * p.v * (1.0 - twoM) / p.n);
  }
  return out;
}

/// Enumerates (S, M, E_SM, log Y(S)) for the full collective spectrum.
inline std::vector<SpinLevel> spectrum_table(const ModelParams& p) {
  std::vector<SpinLevel> rows;
  for (int twoS = p.n % 2; twoS <= p.n; twoS += 2) {
    const HalfInt S{twoS};
    const double lY = log_multiplicity(p.n, S);
    for (int twoM = -twoS; twoM <= twoS; twoM += 2) {
      rows.push_back({S, HalfInt{twoM}, level_energy(p, S, HalfInt{twoM}), lY});
    }
  }
  return rows;
}

}  // namespace xxzent

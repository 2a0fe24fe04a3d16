#pragma once

// Full-Hilbert-space reference: builds the 2^n x 2^n Hamiltonian from local
// spin operators (block by block in S_z, which it conserves), diagonalizes each
// block densely and forms thermal averages plus the explicit two-spin reduced
// density of sites 0 and 1 by partial trace. Nothing here uses the collective
// spectrum formula, so it serves as an independent check of the exact tier.
//
// Only i != j pair terms enter: the on-site parts of S_x^2 + S_y^2 +
// (1 - gamma) S_z^2 sum to exactly -E0, so the pair Hamiltonian is H itself.

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "exact.hpp"
#include "model.hpp"

namespace xxzent {

inline constexpr int kBruteForceMaxSpins = 14;

struct BruteForceResult {
  CollectiveMoments moments;
  Eigen::Matrix4d rho2;  // basis |s0 s1>, index = 2*up(s0) + up(s1): 0=dd 1=du 2=ud 3=uu
};

namespace detail {

struct SectorOperators {
  std::vector<unsigned> states;
  Eigen::MatrixXd h;
  Eigen::MatrixXd s2;
};

// Bit i set means spin i points up (s^z_i = +1/2).
inline SectorOperators build_sector(const ModelParams& p, int ups) {
  const int n = p.n;
  const double V = p.coupling();
  SectorOperators sec;
  for (unsigned s = 0; s < (1u << n); ++s)
    if (std::popcount(s) == ups) sec.states.push_back(s);
  const auto dim = static_cast<Eigen::Index>(sec.states.size());
  std::vector<int> index(1u << n, -1);
  for (Eigen::Index k = 0; k < dim; ++k) index[sec.states[k]] = static_cast<int>(k);

  sec.h = Eigen::MatrixXd::Zero(dim, dim);
  sec.s2 = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const unsigned s = sec.states[k];
    double zz = 0.0;  // sum over i<j of s^z_i s^z_j
    double sz = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = (s >> i & 1u) ? 0.5 : -0.5;
      sz += zi;
      for (int j = i + 1; j < n; ++j) zz += zi * ((s >> j & 1u) ? 0.5 : -0.5);
    }
    // sum_{i != j} over ordered pairs doubles the i<j sum.
    sec.h(k, k) = p.b * sz - V * (1.0 - p.gamma) * 2.0 * zz;
    sec.s2(k, k) = 0.75 * n + 2.0 * zz;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (((s >> i) & 1u) == ((s >> j) & 1u)) continue;
        // s^x_i s^x_j + s^y_i s^y_j swaps antiparallel spins with amplitude 1/2;
        // ordered pairs (i,j),(j,i) together give amplitude 1.
        const unsigned t = s ^ (1u << i) ^ (1u << j);
        const int kt = index[t];
        sec.h(kt, k) += -V;
        sec.s2(kt, k) += 1.0;
      }
    }
  }
  return sec;
}

}  // namespace detail

inline BruteForceResult brute_force_state(const ModelParams& p) {
  p.validate();
  if (p.n > kBruteForceMaxSpins)
    throw DomainError("brute force limited to n <= 14 (dense 2^n-dimensional diagonalization)");
  if (!(p.T > 0.0)) throw DomainError("brute force requires T > 0");
  const int n = p.n;
  const double beta = p.beta();

  struct Block {
    detail::SectorOperators ops;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
  };
  std::vector<Block> blocks;
  double e_min = numerics::inf;
  for (int ups = 0; ups <= n; ++ups) {
    Block blk{detail::build_sector(p, ups), {}, {}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.ops.h);
    blk.energies = es.eigenvalues();
    blk.vectors = es.eigenvectors();
    e_min = std::min(e_min, blk.energies.minCoeff());
    blocks.push_back(std::move(blk));
  }

  BruteForceResult out;
  out.rho2.setZero();
  double z = 0.0, sm = 0.0, sm2 = 0.0, ss = 0.0;
  for (int ups = 0; ups <= n; ++ups) {
    const Block& blk = blocks[ups];
    const double m = ups - 0.5 * n;
    std::vector<int> index(1u << n, -1);
    for (std::size_t k = 0; k < blk.ops.states.size(); ++k) index[blk.ops.states[k]] = int(k);
    for (Eigen::Index e = 0; e < blk.energies.size(); ++e) {
      const double w = std::exp(-beta * (blk.energies(e) - e_min));
      if (w == 0.0) continue;
      const auto psi = blk.vectors.col(e);
      z += w;
      sm += w * m;
      sm2 += w * m * m;
      ss += w * psi.dot(blk.ops.s2 * psi);
      // Partial trace over sites 2..n-1.
      for (std::size_t k = 0; k < blk.ops.states.size(); ++k) {
        const unsigned s = blk.ops.states[k];
        const unsigned rest = s & ~3u;
        const int a = int(s & 1u) * 2 + int(s >> 1 & 1u);
        for (unsigned pair = 0; pair < 4; ++pair) {
          const unsigned t = rest | pair;
          const int kt = index[t];
          if (kt < 0) continue;
          const int c = int(pair & 1u) * 2 + int(pair >> 1 & 1u);
          out.rho2(a, c) += w * psi(Eigen::Index(k)) * psi(kt);
        }
      }
    }
  }
  out.rho2 /= z;
  out.moments.logZ = -beta * e_min + std::log(z);
  out.moments.sz = sm / z;
  out.moments.sz2 = sm2 / z;
  out.moments.s2 = ss / z;
  return out;
}

inline CollectiveMoments brute_force_moments(const ModelParams& p) {
  return brute_force_state(p).moments;
}

/// Pair state read off the explicit reduced density.
inline PairState brute_force_pair(const BruteForceResult& r) {
  PairState ps;
  ps.p_plus = r.rho2(3, 3);
  ps.p_minus = r.rho2(0, 0);
  ps.p = 0.5 * (r.rho2(1, 1) + r.rho2(2, 2));
  ps.alpha = r.rho2(1, 2);
  return ps;
}

}  // namespace xxzent

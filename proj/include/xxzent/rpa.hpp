#pragma once

// Static-path + RPA machinery for Hamiltonians H = sum_i H0_i - 1/2 sum_nu v_nu (Q^nu)^2
// with Q^nu = sum_i Q^nu_i. Sites of identical local structure are grouped into
// types with a multiplicity count, so the collective problem of n equal spins
// costs one 2x2 diagonalization.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "numerics.hpp"

namespace xxzent::rpa {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

/// One site type: local Hamiltonian, coupling operators Q^nu (one per
/// channel, hermitian) and the number of identical copies.
struct LocalSite {
  Matrix h0;
  std::vector<Matrix> q_ops;
  int count = 1;

  Eigen::Index dim() const { return h0.rows(); }
};

struct CoupledSystem {
  std::vector<LocalSite> sites;
  std::vector<double> couplings;  // v_nu > 0

  std::size_t channels() const { return couplings.size(); }

  void validate() const {
    if (sites.empty()) throw DomainError("coupled system has no sites");
    for (double v : couplings)
      if (!(v > 0.0)) throw DomainError("couplings must be positive");
    for (const auto& s : sites) {
      if (s.count < 1) throw DomainError("site count must be >= 1");
      const auto d = s.dim();
      if (s.h0.cols() != d) throw DomainError("h0 must be square");
      if (!s.h0.isApprox(s.h0.adjoint(), 1e-12))
        throw DomainError("h0 must be hermitian");
      if (s.q_ops.size() != couplings.size())
        throw DomainError("each site needs one coupling operator per channel");
      for (const auto& q : s.q_ops) {
        if (q.rows() != d || q.cols() != d) throw DomainError("operator dimension mismatch");
        // Antihermitian channels would make h(x) non-hermitian for real x.
        if (!q.isApprox(q.adjoint(), 1e-12))
          throw DomainError("only hermitian coupling operators are supported");
      }
    }
  }
};

/// Eigensystem of one linearized site h_t(x) = H0_t - sum_nu x_nu Q^nu_t.
struct SiteEigensystem {
  Vector energies;
  Vector probs;
  std::vector<Matrix> q_eig;  // Q^nu in the eigenbasis, <k|Q|k'>
  double log_z = 0.0;         // log tr exp(-beta h_t)
  int count = 1;
};

struct StaticConfiguration {
  Vector x;
  double T = 0.0;
  std::vector<SiteEigensystem> sites;

  double beta() const { return 1.0 / T; }
  double log_z() const {
    double s = 0.0;
    for (const auto& st : sites) s += st.count * st.log_z;
    return s;
  }
  /// <Q^nu>_x summed over all sites.
  Vector expectation() const {
    const auto channels = sites.front().q_eig.size();
    Vector q = Vector::Zero(static_cast<Eigen::Index>(channels));
    for (const auto& st : sites)
      for (std::size_t nu = 0; nu < channels; ++nu)
        q(nu) += st.count * (st.probs.array() * st.q_eig[nu].diagonal().real().array()).sum();
    return q;
  }
};

/// Local eigendecomposition and Boltzmann weights at static field x.
inline StaticConfiguration linearize(const CoupledSystem& sys, const Vector& x, double T) {
  if (!(T > 0.0)) throw DomainError("linearize requires T > 0");
  if (static_cast<std::size_t>(x.size()) != sys.channels())
    throw DomainError("static field has wrong number of components");
  StaticConfiguration cfg;
  cfg.x = x;
  cfg.T = T;
  const double beta = 1.0 / T;
  for (const auto& site : sys.sites) {
    Matrix h = site.h0;
    for (std::size_t nu = 0; nu < sys.channels(); ++nu) h -= x(nu) * site.q_ops[nu];
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw ConvergenceError("local diagonalization failed", 0.0);
    SiteEigensystem st;
    st.count = site.count;
    st.energies = es.eigenvalues();
    const double e0 = st.energies.minCoeff();
    Vector w = (-beta * (st.energies.array() - e0)).exp();
    const double z = w.sum();
    st.probs = w / z;
    st.log_z = -beta * e0 + std::log(z);
    for (const auto& q : site.q_ops) st.q_eig.push_back(es.eigenvectors().adjoint() * q * es.eigenvectors());
    cfg.sites.push_back(std::move(st));
  }
  return cfg;
}

namespace detail {

inline double energy_scale(const StaticConfiguration& cfg) {
  double s = 0.0;
  for (const auto& st : cfg.sites) s = std::max(s, st.energies.cwiseAbs().maxCoeff());
  return std::max(s, 1.0);
}

// Ordered local pair alpha = (k, k') on site type t.
struct Pair {
  std::size_t type;
  Eigen::Index k, kp;
  double lambda;  // eps_k - eps_k'
  double p;       // p_k - p_k'
};

inline constexpr double kDegenerateGap = 1e-12;

inline std::vector<Pair> pairs(const StaticConfiguration& cfg, int* excluded = nullptr) {
  const double tol = kDegenerateGap * energy_scale(cfg);
  std::vector<Pair> out;
  int skipped = 0;
  for (std::size_t t = 0; t < cfg.sites.size(); ++t) {
    const auto& st = cfg.sites[t];
    for (Eigen::Index k = 0; k < st.energies.size(); ++k)
      for (Eigen::Index kp = 0; kp < st.energies.size(); ++kp) {
        if (k == kp) continue;
        const double l = st.energies(k) - st.energies(kp);
        if (std::abs(l) < tol) {
          ++skipped;
          continue;
        }
        out.push_back({t, k, kp, l, st.probs(k) - st.probs(kp)});
      }
  }
  if (excluded) *excluded = skipped;
  return out;
}

}  // namespace detail

/// R_{nu nu'}(omega) = sum_i sum_{k != k'} <k|Q^nu|k'><k'|Q^nu'|k> (p_k - p_k')/(eps_k - eps_k' + omega).
inline Matrix response_matrix(const StaticConfiguration& cfg, cplx omega) {
  const auto channels = static_cast<Eigen::Index>(cfg.sites.front().q_eig.size());
  Matrix r = Matrix::Zero(channels, channels);
  const double pole_tol = 1e-12 * detail::energy_scale(cfg);
  for (const auto& a : detail::pairs(cfg)) {
    const auto& st = cfg.sites[a.type];
    const cplx den = a.lambda + omega;
    if (std::abs(den) < pole_tol) throw DomainError("response matrix evaluated at a pole");
    const cplx f = st.count * a.p / den;
    for (Eigen::Index nu = 0; nu < channels; ++nu)
      for (Eigen::Index mu = 0; mu < channels; ++mu)
        r(nu, mu) += f * st.q_eig[nu](a.k, a.kp) * st.q_eig[mu](a.kp, a.k);
  }
  return r;
}

/// Static response R(0) with degenerate local pairs taken in the limit
/// (p_k - p_k')/(eps_k - eps_k') -> -beta p_k. Real symmetric for hermitian Q.
inline Eigen::MatrixXd static_response(const StaticConfiguration& cfg) {
  const auto channels = static_cast<Eigen::Index>(cfg.sites.front().q_eig.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(channels, channels);
  const double tol = detail::kDegenerateGap * detail::energy_scale(cfg);
  const double beta = cfg.beta();
  for (const auto& st : cfg.sites) {
    const auto d = st.energies.size();
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index kp = 0; kp < d; ++kp) {
        if (k == kp) continue;
        const double l = st.energies(k) - st.energies(kp);
        const double ratio =
            std::abs(l) < tol ? -beta * st.probs(k) : (st.probs(k) - st.probs(kp)) / l;
        for (Eigen::Index nu = 0; nu < channels; ++nu)
          for (Eigen::Index mu = 0; mu < channels; ++mu)
            r(nu, mu) +=
                st.count * ratio * std::real(st.q_eig[nu](k, kp) * st.q_eig[mu](kp, k));
      }
  }
  return r;
}

struct RpaSpectrum {
  std::vector<cplx> omegas;   // eigenvalues of A, in +/- pairs
  std::vector<double> lambdas;  // unperturbed lambda_alpha of the kept pairs
  double log_c_rpa = std::numeric_limits<double>::quiet_NaN();
  double c_rpa = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;  // omega^2 + (2 pi T)^2 > 0 for every mode
  bool complex_modes = false;
  int excluded_pairs = 0;
  int offending = -1;  // first mode violating validity

  /// Smallest |omega| among the modes.
  double lowest() const {
    double m = numerics::inf;
    for (auto w : omegas) m = std::min(m, std::abs(w));
    return m;
  }
};

namespace detail {

// omega^2 with the imaginary part dropped when it is roundoff; NaN for a
// genuinely complex quartet.
inline double real_square(cplx w, double scale) {
  const cplx s = w * w;
  if (std::abs(s.imag()) > 1e-8 * scale * scale) return std::numeric_limits<double>::quiet_NaN();
  return s.real();
}

}  // namespace detail

/// log C_RPA = sum_{alpha>0} [log F(lambda^2) - log F(omega^2)],
/// F(s) = sinh(beta sqrt(s)/2)/sqrt(s) continued to s < 0. Both members of
/// every +/- pair are summed and the total halved.
/// RPA energies as eigenvalues of
///   A_{a a'} = lambda_a delta + p_a sum_nu v_nu Q^nu_{-a} Q^nu_{a'}.
/// Sites of one type are reduced to the symmetric combination; the remaining
/// count - 1 copies of every pair keep omega = lambda and do not affect C_RPA.
inline RpaSpectrum rpa_energies(const StaticConfiguration& cfg, const CoupledSystem& sys) {
  RpaSpectrum sp;
  const auto prs = detail::pairs(cfg, &sp.excluded_pairs);
  const auto m = static_cast<Eigen::Index>(prs.size());
  const double beta = cfg.beta();
  if (m == 0) {
    sp.valid = true;
    sp.log_c_rpa = 0.0;
    sp.c_rpa = 1.0;
    return sp;
  }
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& pi = prs[i];
    const auto& si = cfg.sites[pi.type];
    a(i, i) += pi.lambda;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& pj = prs[j];
      const auto& sj = cfg.sites[pj.type];
      cplx s = 0.0;
      for (std::size_t nu = 0; nu < sys.channels(); ++nu)
        s += sys.couplings[nu] * si.q_eig[nu](pi.kp, pi.k) * sj.q_eig[nu](pj.k, pj.kp);
      a(i, j) += pi.p * s * double(sj.count);
    }
  }
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("RPA eigenproblem failed", 0.0);

  const double scale = detail::energy_scale(cfg);
  const double w1sq = std::pow(2.0 * std::numbers::pi / beta, 2);
  double acc = 0.0;
  sp.valid = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx w = es.eigenvalues()(i);
    sp.omegas.push_back(w);
    sp.lambdas.push_back(prs[i].lambda);
    acc += numerics::log_sinhc(prs[i].lambda * prs[i].lambda, beta);
    const double s = detail::real_square(w, scale);
    if (std::isnan(s)) {
      sp.complex_modes = true;
      sp.valid = false;
      if (sp.offending < 0) sp.offending = int(i);
      continue;
    }
    if (!(s + w1sq > 0.0) || std::isnan(numerics::log_sinhc(s, beta))) {
      sp.valid = false;
      if (sp.offending < 0) sp.offending = int(i);
      continue;
    }
    acc -= numerics::log_sinhc(s, beta);
  }
  std::sort(sp.omegas.begin(), sp.omegas.end(),
            [](cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  if (sp.valid) {
    sp.log_c_rpa = 0.5 * acc;
    sp.c_rpa = std::exp(sp.log_c_rpa);
  }
  return sp;
}

/// ln C_RPA of a spectrum built at temperature T; throws BreakdownError when
/// some omega^2 <= -(2 pi T)^2 or a mode is complex.
inline double log_c_rpa(const RpaSpectrum& sp, double T) {
  (void)T;  // already folded in by rpa_energies
  if (!sp.valid)
    throw BreakdownError("RPA validity condition violated (mode " + std::to_string(sp.offending) + ")");
  return sp.log_c_rpa;
}

inline double c_rpa(const RpaSpectrum& sp, double T) { return std::exp(log_c_rpa(sp, T)); }

/// |Det[1 + V R(-omega)]| normalized by prod_nu (1 + sum_mu |v_nu R_{nu mu}|).
/// Every eigenvalue of A zeroes this determinant.
inline double determinant_residual(const StaticConfiguration& cfg, const CoupledSystem& sys, cplx omega) {
  const Matrix r = response_matrix(cfg, -omega);
  const auto c = r.rows();
  Matrix d = Matrix::Identity(c, c);
  double norm = 1.0;
  for (Eigen::Index nu = 0; nu < c; ++nu) {
    double row = 1.0;
    for (Eigen::Index mu = 0; mu < c; ++mu) {
      d(nu, mu) += sys.couplings[nu] * r(nu, mu);
      row += std::abs(sys.couplings[nu] * r(nu, mu));
    }
    norm *= row;
  }
  return std::abs(d.determinant()) / norm;
}

/// Separable free energy F(x) = sum x^2/(2 v) - T log Z(x).
inline double free_energy(const CoupledSystem& sys, const Vector& x, double T) {
  double f = 0.0;
  for (std::size_t nu = 0; nu < sys.channels(); ++nu) f += x(nu) * x(nu) / (2.0 * sys.couplings[nu]);
  return f - T * linearize(sys, x, T).log_z();
}

struct HartreeSolution {
  StaticConfiguration config;
  double free_energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int candidates = 0;  // distinct converged fixed points examined
};

namespace detail {

inline double field_scale(const CoupledSystem& sys) {
  double s = 0.0;
  for (std::size_t nu = 0; nu < sys.channels(); ++nu) {
    double q = 0.0;
    for (const auto& site : sys.sites) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(site.q_ops[nu], Eigen::EigenvaluesOnly);
      q += site.count * es.eigenvalues().cwiseAbs().maxCoeff();
    }
    s = std::max(s, sys.couplings[nu] * q);
  }
  return std::max(s, 1e-300);
}

inline Vector hartree_map(const CoupledSystem& sys, const Vector& x, double T) {
  const Vector q = linearize(sys, x, T).expectation();
  Vector out(q.size());
  for (Eigen::Index nu = 0; nu < q.size(); ++nu) out(nu) = sys.couplings[nu] * q(nu);
  return out;
}

struct Attempt {
  Vector x;
  double residual;
  int iterations;
  bool converged;
};

inline Attempt damped_iteration(const CoupledSystem& sys, Vector x, double T, double tol,
                                int max_iter) {
  constexpr double damping = 0.5;
  double res = numerics::inf;
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = hartree_map(sys, x, T);
    res = (g - x).norm();
    if (res < tol) {
      // Polish toward roundoff: the lowest RPA energy at the solution scales
      // like the square root of the residual.
      Vector best = g;
      for (int extra = 0; extra < 200; ++extra) {
        const Vector g2 = hartree_map(sys, best, T);
        const double r2 = (g2 - best).norm();
        if (!(r2 < res)) break;
        res = r2;
        best = g2;
      }
      return {best, res, it + 1, true};
    }
    x = (1.0 - damping) * x + damping * g;
  }
  return {x, res, max_iter, false};
}

// Scalar reduction along a fixed direction u: rho -> u . G(rho u) - rho.
inline std::optional<Vector> radial_bisection(const CoupledSystem& sys, const Vector& dir,
                                              double T, double scale, double tol) {
  const double nrm = dir.norm();
  if (nrm == 0.0) return std::nullopt;
  const Vector u = dir / nrm;
  auto g = [&](double rho) { return u.dot(hartree_map(sys, rho * u, T)) - rho; };
  const double lo = 1e-9 * scale;
  const double hi = 1.01 * scale;
  if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) return std::nullopt;
  const double rho = numerics::bisect(g, lo, hi, tol);
  return Vector(rho * u);
}

}  // namespace detail

/// Self-consistent x_nu = v_nu <Q^nu>_x. Several starting points are iterated
/// (the guess, zero, +/- scale along every axis); the converged point with the
/// lowest F(x) is returned.
inline HartreeSolution hartree_solve(const CoupledSystem& sys, double T, const Vector& x0) {
  sys.validate();
  if (!(T > 0.0)) throw DomainError("hartree_solve requires T > 0");
  const auto c = static_cast<Eigen::Index>(sys.channels());
  const double scale = detail::field_scale(sys);
  const double tol = 1e-12 * scale;
  constexpr int max_iter = 10000;

  std::vector<Vector> starts;
  if (x0.size() == c) starts.push_back(x0);
  starts.push_back(Vector::Zero(c));
  for (Eigen::Index nu = 0; nu < c; ++nu)
    for (double sgn : {1.0, -1.0}) {
      Vector s = Vector::Zero(c);
      s(nu) = sgn * scale;
      starts.push_back(s);
    }

  HartreeSolution best;
  bool have = false;
  double worst_residual = 0.0;
  std::vector<Vector> found;
  for (const auto& s : starts) {
    auto att = detail::damped_iteration(sys, s, T, tol, max_iter);
    if (!att.converged) {
      if (auto r = detail::radial_bisection(sys, att.x, T, scale, tol)) {
        const Vector g = detail::hartree_map(sys, *r, T);
        att = {g, (g - *r).norm(), att.iterations, (g - *r).norm() < 1e3 * tol};
      }
    }
    if (!att.converged) {
      worst_residual = std::max(worst_residual, att.residual);
      continue;
    }
    bool dup = false;
    for (const auto& f : found) dup = dup || (f - att.x).norm() < 1e-8 * scale;
    if (!dup) found.push_back(att.x);
    const double f = free_energy(sys, att.x, T);
    if (!have || f < best.free_energy - 1e-14 * std::max(1.0, std::abs(f))) {
      best.config = linearize(sys, att.x, T);
      best.free_energy = f;
      best.residual = att.residual;
      best.iterations = att.iterations;
      have = true;
    }
  }
  if (!have) throw ConvergenceError("Hartree iteration did not converge", worst_residual);
  best.candidates = int(found.size());
  return best;
}

struct StaticFluctuation {
  double log_c0 = 0.0;
  double c0 = 1.0;
  int goldstone_modes = 0;
  Vector hessian_eigenvalues;  // of V^{1/2} d^2F V^{1/2}
};

/// C0 = Det[v d^2F/dx dx']^{-1/2} over the non-degenerate directions, using
/// v d^2F = 1 + V (R(0) - sum_k Q_kk dp_k/dx').
inline StaticFluctuation c0_factor(const StaticConfiguration& cfg, const CoupledSystem& sys) {
  const auto c = static_cast<Eigen::Index>(sys.channels());
  const Eigen::MatrixXd r0 = static_response(cfg);
  // sum_k Q^nu_kk dp_k/dx_nu' = beta Cov(Q^nu, Q^nu') per site.
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(c, c);
  for (const auto& st : cfg.sites) {
    for (Eigen::Index nu = 0; nu < c; ++nu) {
      const Vector qn = st.q_eig[nu].diagonal().real();
      for (Eigen::Index mu = 0; mu < c; ++mu) {
        const Vector qm = st.q_eig[mu].diagonal().real();
        const double mn = st.probs.dot(qn), mm = st.probs.dot(qm);
        cov(nu, mu) += st.count * (st.probs.array() * qn.array() * qm.array()).sum() - st.count * mn * mm;
      }
    }
  }
  Eigen::MatrixXd k = r0 - cfg.beta() * cov;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(c, c);
  for (Eigen::Index nu = 0; nu < c; ++nu)
    for (Eigen::Index mu = 0; mu < c; ++mu)
      s(nu, mu) += std::sqrt(sys.couplings[nu] * sys.couplings[mu]) * k(nu, mu);
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  StaticFluctuation out;
  out.hessian_eigenvalues = es.eigenvalues();
  const double cutoff = 1e-8 * std::abs(s.trace());
  for (Eigen::Index i = 0; i < c; ++i) {
    const double e = es.eigenvalues()(i);
    if (std::abs(e) < cutoff) {
      ++out.goldstone_modes;
      continue;
    }
    if (e < 0.0) throw ConvergenceError("static configuration is a saddle point of F", e);
    out.log_c0 -= 0.5 * std::log(e);
  }
  out.c0 = std::exp(out.log_c0);
  return out;
}

}  // namespace xxzent::rpa

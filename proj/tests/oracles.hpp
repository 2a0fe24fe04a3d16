#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace oracle {

/// Wootters concurrence of an arbitrary two-qubit density matrix:
/// C = max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy).
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd sy;
  sy << 0.0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0.0;
  Eigen::Matrix4cd yy;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) yy(2 * i + k, 2 * j + l) = sy(i, j) * sy(k, l);
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

/// Dense exact diagonalization of the full 4x4 two-spin Hamiltonian
/// H = b(s1z + s2z) - V sum_{i != j}[sx sx + sy sy + (1-g) sz sz], V = v/2.
inline Eigen::Vector4d two_spin_spectrum(double v, double g, double b) {
  const double V = v / 2.0;
  // basis |dd>, |du>, |ud>, |uu>
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  const double zz[4] = {0.25, -0.25, -0.25, 0.25};
  const double sz[4] = {-1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < 4; ++k) h(k, k) = b * sz[k] - 2.0 * V * (1.0 - g) * zz[k];
  h(1, 2) = h(2, 1) = -V;  // 2 * (1/2) from the two ordered pairs
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
  return es.eigenvalues();
}

/// Central differences of increasing order for smooth scalar functions.
template <class F>
double derivative(F&& f, double x, double h) {
  return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}

template <class F>
double second_derivative(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
         (12.0 * h * h);
}

/// Squared collective frequency of the anisotropic model at static fields
/// (r, z): (lambda - v t)(lambda - v (1 - g r^2/lambda^2) t), t = tanh(lambda/2T).
inline double closed_form_omega2(double v, double g, double b, double r, double z, double T) {
  const double l = std::hypot(b - z, r);
  const double t = std::tanh(0.5 * l / T);
  return (l - v * t) * (l - v * (1.0 - g * r * r / (l * l)) * t);
}

inline double rel_diff(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle

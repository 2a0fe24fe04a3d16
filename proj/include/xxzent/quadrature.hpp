#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace xxzent::quadrature {

/// Result of an adaptive integration of a K-component integrand.
template <std::size_t K>
struct Result {
  std::array<double, K> value{};
  std::array<double, K> error{};
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Panel {
  double a, b;
  std::array<double, K> value, error, abs_value;
  double priority;  // largest relative error component
  bool operator<(const Panel& o) const { return priority < o.priority; }
};

template <std::size_t K, class F>
Panel<K> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, K> kr{}, ga{}, ab{};
  const auto fc = f(c);
  for (std::size_t k = 0; k < K; ++k) {
    kr[k] = kronrod_w[7] * fc[k];
    ga[k] = gauss_w[3] * fc[k];
    ab[k] = kronrod_w[7] * std::abs(fc[k]);
  }
  for (int j = 0; j < 7; ++j) {
    const auto f1 = f(c - h * kronrod_x[j]);
    const auto f2 = f(c + h * kronrod_x[j]);
    for (std::size_t k = 0; k < K; ++k) {
      kr[k] += kronrod_w[j] * (f1[k] + f2[k]);
      ab[k] += kronrod_w[j] * (std::abs(f1[k]) + std::abs(f2[k]));
      if (j % 2 == 1) ga[k] += gauss_w[j / 2] * (f1[k] + f2[k]);
    }
  }
  Panel<K> p{a, b, {}, {}, {}, 0.0};
  for (std::size_t k = 0; k < K; ++k) {
    p.value[k] = h * kr[k];
    p.error[k] = std::abs(h * (kr[k] - ga[k]));
    p.abs_value[k] = std::abs(h) * ab[k];
  }
  return p;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration of a vector-valued integrand
/// f: double -> std::array<double, K> over [a, b]. Every component shares the
/// same nodes. Convergence requires err_k <= rel_tol * integral of |f_k| for
/// all k (or err_k <= abs_tol).
template <std::size_t K, class F>
Result<K> integrate(F&& f, double a, double b, double rel_tol,
                    double abs_tol = 0.0, int max_panels = 4000, int initial_panels = 1) {
  using Panel = detail::Panel<K>;
  auto score = [&](Panel& p) {
    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double scale = std::max(rel_tol * p.abs_value[k], abs_tol);
      worst = std::max(worst, scale > 0.0 ? p.error[k] / scale : p.error[k]);
    }
    p.priority = worst;
  };

  std::priority_queue<Panel> heap;
  Result<K> out;
  std::array<double, K> total{}, total_err{}, total_abs{};
  auto push = [&](Panel p) {
    score(p);
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += p.value[k];
      total_err[k] += p.error[k];
      total_abs[k] += p.abs_value[k];
    }
    heap.push(p);
    out.evaluations += 15;
  };
  initial_panels = std::max(initial_panels, 1);
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + (b - a) * i / initial_panels;
    const double hi = i + 1 == initial_panels ? b : a + (b - a) * (i + 1) / initial_panels;
    push(detail::gk15<K>(f, lo, hi));
  }

  auto done = [&] {
    for (std::size_t k = 0; k < K; ++k) {
      if (total_err[k] > std::max(rel_tol * total_abs[k], abs_tol)) return false;
    }
    return true;
  };

  int panels = initial_panels;
  while (!done() && panels < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    for (std::size_t k = 0; k < K; ++k) {
      total[k] -= worst.value[k];
      total_err[k] -= worst.error[k];
      total_abs[k] -= worst.abs_value[k];
    }
    const double mid = 0.5 * (worst.a + worst.b);
    push(detail::gk15<K>(f, worst.a, mid));
    push(detail::gk15<K>(f, mid, worst.b));
    ++panels;
  }

  // Re-sum from the panels to shed accumulated subtraction roundoff.
  out.value = {};
  out.error = {};
  while (!heap.empty()) {
    const Panel& p = heap.top();
    for (std::size_t k = 0; k < K; ++k) {
      out.value[k] += p.value[k];
      out.error[k] += p.error[k];
    }
    heap.pop();
  }
  out.converged = done();
  return out;
}

/// Scalar convenience wrapper.
template <class F>
Result<1> integrate_scalar(F&& f, double a, double b, double rel_tol,
                           double abs_tol = 0.0) {
  auto g = [&](double x) { return std::array<double, 1>{f(x)}; };
  return integrate<1>(g, a, b, rel_tol, abs_tol);
}

}  // namespace xxzent::quadrature

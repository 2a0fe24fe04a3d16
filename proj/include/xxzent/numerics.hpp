#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace xxzent::numerics {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// log(2 cosh x) without overflow.
inline double log_2cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

/// log(sinh x) for x > 0.
inline double log_sinh(double x) {
  if (x < 20.0) return std::log(std::sinh(x));
  return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

/// 1/cosh^2(x) without overflow.
inline double sech2(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

/// tanh(beta*l/2)/l, finite at l = 0.
inline double tanh_over(double l, double beta) {
  const double x = 0.5 * beta * l;
  if (std::abs(x) < 1e-6) return 0.5 * beta * (1.0 - x * x / 3.0);
  return std::tanh(x) / l;
}

/// log of F(s) = sinh(beta sqrt(s)/2)/sqrt(s), continued to s < 0 as
/// sin(beta sqrt(-s)/2)/sqrt(-s). F is entire in s; it is positive iff
/// s > -(2 pi/beta)^2. Returns NaN outside that window.
inline double log_sinhc(double s, double beta) {
  const double half_beta = 0.5 * beta;
  const double x = half_beta * std::sqrt(std::abs(s));
  if (x < 1e-4) {
    const double x2 = (s >= 0.0 ? 1.0 : -1.0) * x * x;
    return std::log(half_beta) + std::log1p(x2 / 6.0 + x2 * x2 / 120.0);
  }
  if (s > 0.0) return std::log(half_beta) + log_sinh(x) - std::log(x);
  if (x >= std::numbers::pi) return std::numeric_limits<double>::quiet_NaN();
  return std::log(half_beta) + std::log(std::sin(x) / x);
}

/// Streaming log-sum-exp: accumulates log(sum_i exp(a_i)).
class LogAccumulator {
 public:
  void add(double log_term) {
    if (log_term == -inf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double log() const { return max_ == -inf ? -inf : max_ + std::log(sum_); }
  bool empty() const { return max_ == -inf; }

 private:
  double max_ = -inf;
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> a) {
  if (a.empty()) return -inf;
  const double m = *std::max_element(a.begin(), a.end());
  if (m == -inf) return -inf;
  double s = 0.0;
  for (double x : a) s += std::exp(x - m);
  return m + std::log(s);
}

/// log(exp(a) - exp(b)) for a >= b.
inline double log_diff_exp(double a, double b) {
  if (b == -inf) return a;
  return a + std::log1p(-std::exp(b - a));
}

/// Plain bisection on a bracketed sign change; returns the midpoint of the
/// final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  double flo = f(lo);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = a;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

inline std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> out = linspace(std::log(a), std::log(b), count);
  for (double& x : out) x = std::exp(x);
  return out;
}

}  // namespace xxzent::numerics

#pragma once

// Sweeps, limit temperature / limit field root finding and tier comparison on
// top of the single-point evaluators.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "brute_force.hpp"
#include "cmfa.hpp"
#include "common.hpp"
#include "cspa.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "numerics.hpp"

namespace xxzent::analysis {

/// Result of one tier at one parameter point. `concurrence` is set iff
/// status == ok. `indicator` is positive iff the pair is entangled: the exact
/// tier stores ln|alpha| - ln sqrt(p+ p-), the others |alpha| - sqrt(p+ p-).
struct CurvePoint {
  std::size_t index = 0;
  ModelParams params;
  Tier tier = Tier::exact;
  Status status = Status::ok;
  bool has_moments = false;
  CollectiveMoments moments;
  std::optional<ConcurrenceResult> concurrence;
  double indicator = -numerics::inf;
  std::string message;
  double wall_time = 0.0;  // seconds; never written to the data files

  bool entangled() const {
    if (status != Status::ok) return false;
    if (tier == Tier::exact) return indicator > 0.0;
    return indicator > 0.5 * kApproxResolution;
  }
};

namespace detail {

inline void fill_from_pair(CurvePoint& pt, const PairState& ps) {
  pt.concurrence = concurrence(ps, pt.params.n, pt.tier);
  pt.indicator = std::abs(ps.alpha) - std::sqrt(std::max(ps.p_plus, 0.0) * std::max(ps.p_minus, 0.0));
}

inline void evaluate_into(CurvePoint& pt) {
  const ModelParams& p = pt.params;
  p.validate();
  switch (pt.tier) {
    case Tier::bruteforce: {
      if (p.n > kBruteForceMaxSpins)
        throw DomainError("bruteforce tier is limited to n <= " + std::to_string(kBruteForceMaxSpins));
      if (!(p.T > 0.0)) throw NotApplicable("bruteforce tier needs T > 0");
      const auto r = brute_force_state(p);
      pt.moments = r.moments;
      pt.has_moments = true;
      fill_from_pair(pt, brute_force_pair(r));
      return;
    }
    case Tier::exact: {
      const ExactState s = p.T > 0.0 ? exact_state(p) : ground_state(p);
      pt.moments = s.moments;
      pt.has_moments = true;
      pt.concurrence = concurrence(s.pair, p.n, Tier::exact);
      pt.indicator = s.log_ratio;
      return;
    }
    case Tier::cspa:
    case Tier::spa: {
      if (!(p.T > 0.0)) throw NotApplicable("static path tiers need T > 0");
      const auto ev = cspa_evaluate(p, pt.tier);
      if (ev.has_moments) {
        pt.moments = ev.moments;
        pt.has_moments = true;
      }
      if (ev.status != Status::ok) {
        pt.status = ev.status;
        pt.message = ev.message;
        return;
      }
      fill_from_pair(pt, pair_state(ev.moments, p.n));
      return;
    }
    case Tier::cmfa:
    case Tier::mfa: {
      if (!(p.T > 0.0)) throw NotApplicable("mean-field tiers need T > 0");
      const auto ev = cmfa_evaluate(p, pt.tier);
      pt.moments = ev.moments;
      pt.has_moments = true;
      if (ev.status != Status::ok) {
        pt.status = ev.status;
        pt.message = "outside the CMFA applicability edge b*";
        return;
      }
      if (pt.tier == Tier::cmfa && ev.mf.phase == Phase::normal) {
        ConcurrenceResult c;
        c.tier = Tier::cmfa;
        pt.concurrence = c;
        pt.indicator = -numerics::inf;
        return;
      }
      fill_from_pair(pt, pair_state(ev.moments, p.n));
      return;
    }
  }
}

}  // namespace detail

/// Evaluate one tier at one point. Never throws for numerical trouble: the
/// outcome is recorded in the status.
inline CurvePoint evaluate_point(const ModelParams& p, Tier tier) {
  CurvePoint pt;
  pt.params = p;
  pt.tier = tier;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    detail::evaluate_into(pt);
  } catch (const NotApplicable& e) {
    pt.status = Status::not_applicable;
    pt.message = e.what();
  } catch (const BreakdownError& e) {
    pt.status = Status::breakdown;
    pt.message = e.what();
  } catch (const std::exception& e) {
    pt.status = Status::error;
    pt.message = e.what();
  }
  if (pt.status != Status::ok) {
    pt.concurrence.reset();
    pt.indicator = -numerics::inf;
  }
  pt.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pt;
}

// ---------------------------------------------------------------- sweeps

struct Axis {
  std::string name;  // b, T, gamma, v or n
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log = false;

  std::vector<double> values() const {
    return log ? numerics::logspace(min, max, count) : numerics::linspace(min, max, count);
  }
};

/// Parses "axis:min:max:count[:log]".
inline Axis parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 4 && parts.size() != 5)
    throw std::invalid_argument("grid must look like axis:min:max:count[:log], got '" + std::string(text) + "'");
  Axis a;
  a.name = parts[0];
  try {
    std::size_t used = 0;
    a.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("min");
    a.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("max");
    a.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed number in grid '" + std::string(text) + "'");
  }
  if (parts.size() == 5) {
    if (parts[4] == "log") a.log = true;
    else if (parts[4] != "lin") throw std::invalid_argument("grid spacing must be lin or log");
  }
  return a;
}

inline ModelParams with_axis(ModelParams p, const std::string& axis, double x) {
  if (axis == "b") p.b = x;
  else if (axis == "T") p.T = x;
  else if (axis == "gamma") p.gamma = x;
  else if (axis == "v") p.v = x;
  else if (axis == "n") p.n = static_cast<int>(std::lround(x));
  else throw std::invalid_argument("unknown grid axis '" + axis + "'");
  return p;
}

struct SweepSpec {
  Tier tier = Tier::exact;
  ModelParams fixed;
  std::vector<Axis> grid;  // first axis outermost
  unsigned threads = 0;    // 0: hardware concurrency

  /// Throws std::invalid_argument for a malformed spec.
  void validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep needs at least one grid axis");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& a = grid[i];
      if (a.name != "b" && a.name != "T" && a.name != "gamma" && a.name != "v" && a.name != "n")
        throw std::invalid_argument("unknown grid axis '" + a.name + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (grid[j].name == a.name) throw std::invalid_argument("grid axis '" + a.name + "' given twice");
      if (a.count < 2) throw std::invalid_argument("grid count must be >= 2");
      if (!(a.min < a.max)) throw std::invalid_argument("grid needs min < max");
      if (a.log && !(a.min > 0.0)) throw std::invalid_argument("log grid needs min > 0");
    }
    int n_max = fixed.n;
    for (const auto& a : grid)
      if (a.name == "n") n_max = static_cast<int>(std::lround(a.max));
    if (tier == Tier::bruteforce && n_max > kBruteForceMaxSpins)
      throw std::invalid_argument("bruteforce tier is limited to n <= " + std::to_string(kBruteForceMaxSpins));
    try {
      for (const auto& p : points()) p.validate();
    } catch (const DomainError& e) {
      throw std::invalid_argument(e.what());
    }
  }

  std::vector<ModelParams> points() const {
    std::vector<ModelParams> out{fixed};
    for (const auto& a : grid) {
      std::vector<ModelParams> next;
      const auto xs = a.values();
      next.reserve(out.size() * xs.size());
      for (const auto& p : out)
        for (double x : xs) next.push_back(with_axis(p, a.name, x));
      out = std::move(next);
    }
    return out;
  }
};

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned w = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(jobs, 1)));
}

/// Runs `job(i)` for i in [0, count) on a small worker pool.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
  const unsigned w = worker_count(threads, count);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (unsigned k = 0; k < w; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
}

/// Evaluates every grid point of the sweep. Results are in grid order.
inline std::vector<CurvePoint> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto pts = spec.points();
  std::vector<CurvePoint> out(pts.size());
  parallel_for(pts.size(), spec.threads, [&](std::size_t i) {
    out[i] = evaluate_point(pts[i], spec.tier);
    out[i].index = i;
  });
  return out;
}

// ---------------------------------------------------------------- limits

/// One entangled band of the scanned variable. `lo_sign_change` is true when
/// the lower end separates two successfully evaluated points (a genuine onset);
/// it is false when the band starts at the probe edge or next to a failed point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_at_edge = false;
  bool hi_at_edge = false;
  bool lo_sign_change = false;
  bool hi_sign_change = false;
};

struct LimitOptions {
  double min = std::numeric_limits<double>::quiet_NaN();  // defaults depend on the scan
  double max = std::numeric_limits<double>::quiet_NaN();
  int probes = 0;
  bool log_grid = false;
  double tolerance = 1e-6;  // in units of v
};

struct LimitResult {
  std::string variable;  // "T" or "b"
  ModelParams params;    // the scanned entry is meaningless
  Tier tier = Tier::exact;
  std::vector<Interval> intervals;
  double limit = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> onsets;
  bool zero_entanglement = true;
  bool limit_at_edge = false;  // the limit is only a lower bound
  int failed_probes = 0;
  int probes = 0;
};

namespace detail {

struct Probe {
  double x;
  bool entangled;
  bool ok;
};

template <class Eval>
double refine(Eval&& eval, double a, double b, bool a_entangled, double tol) {
  // a and b straddle the entangled / not entangled boundary.
  while (std::abs(b - a) > tol) {
    const double m = 0.5 * (a + b);
    const auto pt = eval(m);
    if (pt.entangled() == a_entangled) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

inline LimitResult scan_limits(const ModelParams& base, Tier tier, const std::string& var,
                               const LimitOptions& opt, unsigned threads) {
  auto eval = [&](double x) { return evaluate_point(with_axis(base, var, x), tier); };
  const auto xs = opt.log_grid ? numerics::logspace(opt.min, opt.max, opt.probes)
                               : numerics::linspace(opt.min, opt.max, opt.probes);
  std::vector<Probe> pr(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const auto pt = eval(xs[i]);
    pr[i] = {xs[i], pt.entangled(), pt.status == Status::ok};
  });

  LimitResult res;
  res.variable = var;
  res.params = base;
  res.tier = tier;
  res.probes = static_cast<int>(pr.size());
  for (const auto& q : pr) res.failed_probes += q.ok ? 0 : 1;

  const double tol = opt.tolerance * base.v;
  for (std::size_t i = 0; i < pr.size();) {
    if (!pr[i].entangled) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < pr.size() && pr[j + 1].entangled) ++j;
    Interval iv;
    if (i == 0) {
      iv.lo = pr[0].x;
      iv.lo_at_edge = true;
    } else {
      iv.lo = refine(eval, pr[i].x, pr[i - 1].x, true, tol);
      iv.lo_sign_change = pr[i - 1].ok;
    }
    if (j + 1 == pr.size()) {
      iv.hi = pr[j].x;
      iv.hi_at_edge = true;
    } else {
      iv.hi = refine(eval, pr[j].x, pr[j + 1].x, true, tol);
      iv.hi_sign_change = pr[j + 1].ok;
    }
    res.intervals.push_back(iv);
    i = j + 1;
  }
  res.zero_entanglement = res.intervals.empty();
  return res;
}

}  // namespace detail

/// Largest temperature with C > 0 at fixed field. The probe grid is
/// log-spaced in [1e-3 v, v]; every sign change is refined by bisection and
/// lower ends that are genuine sign changes are reported as onsets.
inline LimitResult limit_temperature(const ModelParams& p, Tier tier, LimitOptions opt = {},
                                     unsigned threads = 0) {
  if (std::isnan(opt.min)) opt.min = 1e-3 * p.v;
  if (std::isnan(opt.max)) opt.max = p.v;
  if (opt.probes == 0) opt.probes = 64;
  opt.log_grid = true;
  auto res = detail::scan_limits(p.with_T(opt.max), tier, "T", opt, threads);
  if (res.zero_entanglement) return res;
  res.limit = res.intervals.back().hi;
  res.limit_at_edge = res.intervals.back().hi_at_edge;
  for (const auto& iv : res.intervals)
    if (iv.lo_sign_change) res.onsets.push_back(iv.lo);
  return res;
}

/// Smallest field b >= 0 at which C vanishes at fixed temperature. Bands of
/// weak entanglement beyond it (the exact far-field band) stay in `intervals`.
inline LimitResult limit_field(const ModelParams& p, Tier tier, LimitOptions opt = {},
                               unsigned threads = 0) {
  if (std::isnan(opt.min)) opt.min = 0.0;
  if (std::isnan(opt.max)) opt.max = 3.0 * p.v;
  if (opt.probes == 0) opt.probes = 128;
  opt.log_grid = false;
  auto res = detail::scan_limits(p.with_b(opt.min), tier, "b", opt, threads);
  if (res.zero_entanglement) return res;
  res.limit = res.intervals.front().hi;
  res.limit_at_edge = res.intervals.front().hi_at_edge;
  for (const auto& iv : res.intervals)
    if (iv.lo_sign_change) res.onsets.push_back(iv.lo);
  return res;
}

// ---------------------------------------------------------------- compare

struct Comparison {
  Tier a = Tier::exact;
  Tier b = Tier::cmfa;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t compared = 0;
  std::size_t skipped = 0;
  std::vector<CurvePoint> points_a;
  std::vector<CurvePoint> points_b;
};

/// Runs two tiers on the same grid and reports |C_a - C_b| over the points
/// where both succeed.
inline Comparison compare(SweepSpec spec, Tier other) {
  Comparison c;
  c.a = spec.tier;
  c.b = other;
  c.points_a = run_sweep(spec);
  spec.tier = other;
  c.points_b = run_sweep(spec);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.points_a.size(); ++i) {
    const auto& x = c.points_a[i];
    const auto& y = c.points_b[i];
    if (!x.concurrence || !y.concurrence) {
      ++c.skipped;
      continue;
    }
    const double d = std::abs(x.concurrence->concurrence - y.concurrence->concurrence);
    c.max_abs = std::max(c.max_abs, d);
    sum += d;
    ++c.compared;
  }
  if (c.compared > 0) c.mean_abs = sum / double(c.compared);
  return c;
}

}  // namespace xxzent::analysis

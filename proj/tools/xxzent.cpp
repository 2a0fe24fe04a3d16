// Command line front end: single points, sweeps, limit curves, figure data and
// tier comparisons.
//
// Exit codes: 0 ok, 2 invalid arguments, 3 numerical failure, 4 tier not
// applicable at any point.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "xxzent/xxzent.hpp"

namespace {

using namespace xxzent;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNotApplicable = 4;

struct Options {
  int n = 20;
  double v = 1.0;
  double gamma = 1.0;
  double b = 0.0;
  double T = 0.1;
  std::string tier = "exact";
  std::string mode = "full";
  std::string out_format = "csv";
  std::string out_dir;
  unsigned threads = 0;
  std::vector<std::string> grid;
  // limits
  std::optional<double> scan_min, scan_max;
  int probes = 0;
  // figure / compare
  int figure = 1;
  std::string against = "cmfa";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tier selected_tier(const Options& o) {
  Tier t;
  try {
    t = parse_tier(o.tier);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.mode == "degraded") {
    if (t == Tier::cspa) return Tier::spa;
    if (t == Tier::cmfa) return Tier::mfa;
  }
  return t;
}

ModelParams fixed_params(const Options& o) { return ModelParams{o.n, o.v, o.gamma, o.b, o.T}; }

std::vector<analysis::Axis> axes(const Options& o) {
  std::vector<analysis::Axis> out;
  try {
    for (const auto& g : o.grid) out.push_back(analysis::parse_axis(g));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return out;
}

// Writes to <out-dir>/<stem>.<ext>, or to stdout without --out-dir.
template <class Fn>
void emit(const Options& o, const std::string& stem, Fn&& write) {
  if (o.out_dir.empty()) {
    write(std::cout);
    return;
  }
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / (stem + "." + o.out_format);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write(os);
  std::cerr << "wrote " << path.string() << '\n';
}

int exit_code(const std::vector<analysis::CurvePoint>& pts) {
  if (pts.empty()) return kExitOk;
  std::size_t na = 0, failed = 0;
  for (const auto& pt : pts) {
    if (pt.status == Status::not_applicable) ++na;
    if (pt.status == Status::breakdown || pt.status == Status::error) {
      ++failed;
      if (!pt.message.empty()) std::cerr << "point " << pt.index << ": " << pt.message << '\n';
    }
  }
  if (na == pts.size()) return kExitNotApplicable;
  return failed > 0 ? kExitNumerical : kExitOk;
}

void write_points(const Options& o, const std::string& stem, const analysis::SweepSpec& spec,
                  const std::vector<analysis::CurvePoint>& pts) {
  emit(o, stem, [&](std::ostream& os) {
    if (o.out_format == "json") io::write_json(os, io::spec_json(spec), pts);
    else io::write_csv(os, pts);
  });
}

int run_point(const Options& o, const std::string& stem) {
  analysis::SweepSpec spec;
  spec.tier = selected_tier(o);
  spec.fixed = fixed_params(o);
  try {
    spec.fixed.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  std::vector<analysis::CurvePoint> pts{analysis::evaluate_point(spec.fixed, spec.tier)};
  write_points(o, stem, spec, pts);
  return exit_code(pts);
}

analysis::SweepSpec sweep_spec(const Options& o, bool require_grid) {
  analysis::SweepSpec spec;
  spec.tier = selected_tier(o);
  spec.fixed = fixed_params(o);
  spec.grid = axes(o);
  spec.threads = o.threads;
  if (require_grid && spec.grid.empty()) throw UsageError("--grid is required");
  if (!spec.grid.empty()) {
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return spec;
}

int run_sweep(const Options& o) {
  const auto spec = sweep_spec(o, true);
  const auto pts = analysis::run_sweep(spec);
  write_points(o, "sweep", spec, pts);
  return exit_code(pts);
}

int run_limit(const Options& o, bool temperature) {
  const auto spec = sweep_spec(o, false);
  const std::string scanned = temperature ? "T" : "b";
  for (const auto& a : spec.grid)
    if (a.name == scanned) throw UsageError("cannot grid over the scanned variable " + scanned);
  std::vector<ModelParams> bases = spec.grid.empty() ? std::vector<ModelParams>{spec.fixed} : spec.points();

  analysis::LimitOptions lo;
  if (o.scan_min) lo.min = *o.scan_min;
  if (o.scan_max) lo.max = *o.scan_max;
  lo.probes = o.probes;
  if (lo.probes != 0 && lo.probes < 2) throw UsageError("--probes must be >= 2");

  std::vector<analysis::LimitResult> rows;
  for (const auto& p : bases) {
    try {
      (temperature ? p.with_T(1.0) : p).validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    rows.push_back(temperature ? analysis::limit_temperature(p, spec.tier, lo, o.threads)
                               : analysis::limit_field(p, spec.tier, lo, o.threads));
  }
  emit(o, temperature ? "limit_temperature" : "limit_field", [&](std::ostream& os) {
    if (o.out_format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) j.push_back(io::limit_json(r));
      os << j.dump(2) << '\n';
    } else {
      io::write_limit_csv(os, rows);
    }
  });
  bool all_failed = true;
  for (const auto& r : rows) all_failed = all_failed && r.failed_probes == r.probes;
  return all_failed ? kExitNumerical : kExitOk;
}

int run_figure(const Options& o) {
  if (o.out_dir.empty()) throw UsageError("figure needs --out-dir");
  if (o.figure < 1 || o.figure > 5) throw UsageError("--id must be in 1..5");
  const auto out = figures::reproduce_figure(o.figure, o.out_dir, o.threads);
  for (const auto& f : out.files) std::cerr << "wrote " << f.string() << '\n';
  if (out.failed_points > 0) std::cerr << out.failed_points << " points did not evaluate (see status column)\n";
  return kExitOk;
}

int run_compare(const Options& o) {
  const auto spec = sweep_spec(o, true);
  Tier other;
  try {
    other = parse_tier(o.against);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (other == Tier::bruteforce && spec.fixed.n > kBruteForceMaxSpins)
    throw UsageError("bruteforce tier is limited to n <= " + std::to_string(kBruteForceMaxSpins));
  const auto c = analysis::compare(spec, other);
  emit(o, "compare", [&](std::ostream& os) {
    if (o.out_format == "json") {
      nlohmann::json j{{"spec", io::spec_json(spec)},
                       {"against", std::string(to_string(other))},
                       {"compared", c.compared},
                       {"skipped", c.skipped},
                       {"max_abs_dC", c.max_abs},
                       {"mean_abs_dC", c.mean_abs}};
      os << j.dump(2) << '\n';
    } else {
      os << "tier,against,compared,skipped,max_abs_dC,mean_abs_dC\n"
         << fmt::format("{},{},{},{},{},{}\n", to_string(c.a), to_string(c.b), c.compared, c.skipped,
                        io::num(c.max_abs), io::num(c.mean_abs));
    }
  });
  if (c.compared == 0) {
    const int a = exit_code(c.points_a), b = exit_code(c.points_b);
    return a == kExitNotApplicable || b == kExitNotApplicable ? kExitNotApplicable : kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal pairwise entanglement in the fully connected XXZ model"};
  app.set_config("--config", "", "key=value file; command line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  Options o;
  app.add_option("--n", o.n, "number of spins")->check(CLI::Range(2, 1 << 20));
  app.add_option("--v", o.v, "coupling strength v (energy unit)");
  app.add_option("--gamma", o.gamma, "anisotropy, gamma <= 1");
  app.add_option("--b", o.b, "magnetic field");
  app.add_option("--T", o.T, "temperature (k = 1)");
  app.add_option("--tier", o.tier, "bruteforce|exact|cspa|spa|cmfa|mfa");
  app.add_option("--mode", o.mode, "full|degraded (degraded turns cspa into spa and cmfa into mfa)")
      ->check(CLI::IsMember({"full", "degraded"}));
  app.add_option("--out-format", o.out_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out-dir", o.out_dir, "write files here instead of stdout");
  app.add_option("--threads", o.threads, "worker threads (0: all cores)");
  app.add_option("--grid", o.grid, "axis:min:max:count[:log], repeatable (axes b, T, gamma, v, n)");

  auto* moments = app.add_subcommand("moments", "collective moments and ln Z at one point");
  auto* conc = app.add_subcommand("concurrence", "pair concurrence at one point");
  auto* sweep = app.add_subcommand("sweep", "evaluate a tier on a grid");
  auto* ltemp = app.add_subcommand("limit-temp", "limit temperature of entanglement at fixed field");
  auto* lfield = app.add_subcommand("limit-field", "limit field of entanglement at fixed temperature");
  auto* fig = app.add_subcommand("figure", "data and gnuplot script of a reference figure");
  auto* cmp = app.add_subcommand("compare", "max/mean |dC| between two tiers on a grid");
  for (auto* sc : {ltemp, lfield}) {
    sc->add_option("--min", o.scan_min, "lower end of the probe grid");
    sc->add_option("--max", o.scan_max, "upper end of the probe grid");
    sc->add_option("--probes", o.probes, "number of probe points");
  }
  fig->add_option("--id", o.figure, "figure number 1..5")->required();
  cmp->add_option("--against", o.against, "second tier")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*moments) return run_point(o, "moments");
    if (*conc) return run_point(o, "concurrence");
    if (*sweep) return run_sweep(o);
    if (*ltemp) return run_limit(o, true);
    if (*lfield) return run_limit(o, false);
    if (*fig) return run_figure(o);
    if (*cmp) return run_compare(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalid;
}

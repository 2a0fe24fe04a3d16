#pragma once

// Data and gnuplot scripts for the five reference figures. Every figure writes
// its CSV files plus figN.gp into the output directory; the scripts refer to
// the data by relative path and render to figN.png.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "analysis.hpp"
#include "io.hpp"

namespace xxzent::figures {

struct FigureOutput {
  std::vector<std::filesystem::path> files;
  std::size_t failed_points = 0;  // non-ok curve points or failed limit probes
};

namespace detail {

using analysis::CurvePoint;
using analysis::SweepSpec;

class Writer {
 public:
  Writer(std::filesystem::path dir, FigureOutput& out) : dir_(std::move(dir)), out_(out) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    out_.files.push_back(path);
    return os;
  }

 private:
  std::filesystem::path dir_;
  FigureOutput& out_;
};

inline std::vector<CurvePoint> sweep(const ModelParams& fixed, Tier tier, analysis::Axis axis, unsigned threads) {
  SweepSpec s;
  s.tier = tier;
  s.fixed = fixed;
  s.grid = {std::move(axis)};
  s.threads = threads;
  return analysis::run_sweep(s);
}

inline void append(std::vector<CurvePoint>& all, std::vector<CurvePoint> more, FigureOutput& out) {
  for (auto& pt : more) {
    if (pt.status != Status::ok) ++out.failed_points;
    all.push_back(std::move(pt));
  }
}

inline void write_points(Writer& w, const std::string& name, const std::vector<CurvePoint>& pts) {
  auto os = w.open(name);
  io::write_csv(os, pts);
}

inline std::string header(int id, const std::string& extra = "") {
  return fmt::format(
      "# figure {}: run `gnuplot fig{}.gp` in this directory\n"
      "set terminal pngcairo size 900,1100\n"
      "set output 'fig{}.png'\n"
      "set datafile separator ','\n"
      "set datafile missing ''\n"
      "set multiplot layout 2,1\n{}",
      id, id, id, extra);
}

// Selects column `col` of the rows whose tier column equals `tier` and whose
// column `key` equals `value`.
inline std::string pick(const std::string& tier, int key, double value, const std::string& col) {
  return fmt::format("(strcol(1) eq '{}' && ${} == {} ? {} : 1/0)", tier, key, io::num(value), col);
}

inline std::string pick(const std::string& tier, const std::string& col) {
  return fmt::format("(strcol(1) eq '{}' ? {} : 1/0)", tier, col);
}

// ------------------------------------------------------------------ figure 1

inline void figure1(Writer& w, FigureOutput& out, unsigned threads) {
  const analysis::Axis b_axis{"b", 0.0, 1.1, 1101, false};
  std::string gp = header(1, "set xlabel 'b/v'\nset ylabel 'nC'\nset yrange [0:2.2]\n");
  for (double T : {0.005, 0.025}) {
    std::vector<CurvePoint> pts;
    const ModelParams p{20, 1.0, 1.0, 0.0, T};
    append(pts, sweep(p, Tier::exact, b_axis, threads), out);
    append(pts, sweep(p, Tier::cmfa, b_axis, threads), out);
    const std::string name = fmt::format("fig1_T{}.csv", io::num(T));
    write_points(w, name, pts);
    gp += fmt::format(
        "set title 'n=20, gamma=1, T/v={}'\n"
        "plot '{}' using 5:{} with lines title 'exact', \\\n"
        "     '{}' using 5:{} with lines dt 2 title 'CMFA'\n",
        io::num(T), name, pick("exact", "$12"), name, pick("cmfa", "$12"));
  }
  gp += "unset multiplot\n";
  w.open("fig1.gp") << gp;
}

// ------------------------------------------------------------------ figure 2

inline void figure2(Writer& w, FigureOutput& out, unsigned threads) {
  const std::vector<Tier> tiers{Tier::exact, Tier::cmfa, Tier::cspa};
  const ModelParams base{20, 1.0, 1.0, 0.0, 0.1};

  std::vector<CurvePoint> field;
  const analysis::Axis b_axis{"b", 0.0, 1.5, 151, false};
  for (double T : {0.1, 0.2, 0.3})
    for (Tier t : tiers) append(field, sweep(base.with_T(T), t, b_axis, threads), out);
  write_points(w, "fig2_field.csv", field);

  std::vector<CurvePoint> temp;
  const analysis::Axis t_axis{"T", 0.01, 0.6, 119, false};
  for (double b : {0.5, 0.9, 1.1})
    for (Tier t : tiers) append(temp, sweep(base.with_b(b), t, t_axis, threads), out);
  write_points(w, "fig2_temperature.csv", temp);

  std::string gp = header(2, "set ylabel 'nC'\n");
  auto curves = [&](const std::string& file, int key, std::initializer_list<double> values, int xcol) {
    std::string s = "plot ";
    bool first = true;
    for (double x : values)
      for (const char* t : {"exact", "cmfa", "cspa"}) {
        if (!first) s += ", \\\n     ";
        first = false;
        s += fmt::format("'{}' using {}:{} with lines title '{} {}'", file, xcol, pick(t, key, x, "$12"), t,
                         io::num(x));
      }
    return s + "\n";
  };
  gp += "set title 'n=20, gamma=1'\nset xlabel 'b/v'\n";
  gp += curves("fig2_field.csv", 6, {0.1, 0.2, 0.3}, 5);
  gp += "set xlabel 'T/v'\n";
  gp += curves("fig2_temperature.csv", 5, {0.5, 0.9, 1.1}, 6);
  gp += "unset multiplot\n";
  w.open("fig2.gp") << gp;
}

// ------------------------------------------------------------------ figure 3

inline void figure3(Writer& w, FigureOutput& out, unsigned threads) {
  const std::vector<Tier> tiers{Tier::exact, Tier::cmfa, Tier::cspa};

  std::vector<CurvePoint> field;
  const analysis::Axis b_axis{"b", 0.0, 1.2, 121, false};
  for (int n : {20, 100, 1000, 8810})
    for (Tier t : tiers) append(field, sweep(ModelParams{n, 1.0, 1.0, 0.0, 0.1}, t, b_axis, threads), out);
  write_points(w, "fig3_field.csv", field);

  std::vector<CurvePoint> temp;
  const analysis::Axis t_axis{"T", 0.01, 0.5, 99, false};
  for (int n : {20, 100, 1000})
    for (Tier t : tiers) append(temp, sweep(ModelParams{n, 1.0, 1.0, 0.5, 0.1}, t, t_axis, threads), out);
  write_points(w, "fig3_temperature.csv", temp);

  std::string gp = header(3, "set ylabel 'nC'\n");
  auto curves = [&](const std::string& file, std::initializer_list<int> ns, int xcol) {
    std::string s = "plot ";
    bool first = true;
    for (int n : ns)
      for (const char* t : {"exact", "cmfa", "cspa"}) {
        if (!first) s += ", \\\n     ";
        first = false;
        s += fmt::format("'{}' using {}:{} with lines title '{} n={}'", file, xcol, pick(t, 2, n, "$12"), t, n);
      }
    return s + "\n";
  };
  gp += "set title 'T/v=0.1, gamma=1'\nset xlabel 'b/v'\n";
  gp += curves("fig3_field.csv", {20, 100, 1000, 8810}, 5);
  gp += "set title 'b/v=0.5, gamma=1'\nset xlabel 'T/v'\n";
  gp += curves("fig3_temperature.csv", {20, 100, 1000}, 6);
  gp += "unset multiplot\n";
  w.open("fig3.gp") << gp;
}

// ------------------------------------------------------------------ figures 4, 5

inline void limit_curve(std::vector<analysis::LimitResult>& rows, const ModelParams& p, Tier tier,
                        const std::vector<double>& fields, analysis::LimitOptions opt, unsigned threads,
                        FigureOutput& out) {
  for (double b : fields) {
    auto r = analysis::limit_temperature(p.with_b(b), tier, opt, threads);
    out.failed_points += static_cast<std::size_t>(r.failed_probes);
    rows.push_back(std::move(r));
  }
}

inline std::string tc_function(double gamma) {
  return fmt::format("Tc(x) = (x/{0} < 1e-9 ? 0.5 : (x/{0} < 1 ? (x/{0})/(2*atanh(x/{0})) : 0))\n", io::num(gamma));
}

inline void figure4(Writer& w, FigureOutput& out, unsigned threads) {
  const auto fields = numerics::linspace(0.0, 2.0, 41);
  std::vector<analysis::LimitResult> rows;
  for (int n : {20, 100, 1000}) {
    const ModelParams p{n, 1.0, 1.0, 0.0, 1.0};
    limit_curve(rows, p, Tier::exact, fields, {}, threads, out);
    limit_curve(rows, p, Tier::cmfa, fields, {}, threads, out);
    if (n <= 100) limit_curve(rows, p, Tier::cspa, fields, {}, threads, out);
  }
  {
    auto os = w.open("fig4_limit_temperature.csv");
    io::write_limit_csv(os, rows);
  }
  std::string gp =
      "# figure 4: run `gnuplot fig4.gp` in this directory\n"
      "set terminal pngcairo size 900,600\n"
      "set output 'fig4.png'\n"
      "set datafile separator ','\n"
      "set datafile missing ''\n"
      "set xlabel 'b/v'\nset ylabel 'T_L/v'\n";
  gp += tc_function(1.0);
  gp += "plot ";
  bool first = true;
  for (int n : {20, 100, 1000})
    for (const char* t : {"exact", "cmfa", "cspa"}) {
      if (n > 100 && std::string(t) == "cspa") continue;
      if (!first) gp += ", \\\n     ";
      first = false;
      gp += fmt::format("'fig4_limit_temperature.csv' using 5:{} with lines title '{} n={}'", pick(t, 2, n, "$8"),
                        t, n);
    }
  gp += ", \\\n     [0:1] Tc(x) dt 3 title 'T_c'\n";
  w.open("fig4.gp") << gp;
}

inline void figure5(Writer& w, FigureOutput& out, unsigned threads) {
  std::vector<analysis::LimitResult> rows;
  const auto fields = numerics::linspace(0.0, 1.2, 25);
  const auto coarse = numerics::linspace(0.0, 1.2, 13);
  analysis::LimitOptions slow;
  slow.probes = 32;
  slow.tolerance = 1e-4;
  for (double g : {1.0, 0.75, 0.5}) {
    const ModelParams p{100, 1.0, g, 0.0, 1.0};
    limit_curve(rows, p, Tier::exact, fields, {}, threads, out);
    limit_curve(rows, p, Tier::cmfa, fields, {}, threads, out);
    // The anisotropic static path integral is two-dimensional and much slower.
    if (g == 1.0) limit_curve(rows, p, Tier::cspa, fields, {}, threads, out);
    else limit_curve(rows, p, Tier::cspa, coarse, slow, threads, out);
  }
  {
    auto os = w.open("fig5_limit_temperature.csv");
    io::write_limit_csv(os, rows);
  }

  std::vector<CurvePoint> temp;
  const analysis::Axis t_axis{"T", 0.005, 0.6, 120, false};
  for (double g : {1.0, 0.5})
    for (int n : {20, 100, 1000})
      for (Tier t : {Tier::exact, Tier::cmfa})
        append(temp, sweep(ModelParams{n, 1.0, g, 0.0, 0.1}, t, t_axis, threads), out);
  write_points(w, "fig5_temperature.csv", temp);

  std::string gp = header(5, "");
  gp += "set title 'n=100'\nset xlabel 'b/v'\nset ylabel 'T_L/v'\nplot ";
  bool first = true;
  for (double g : {1.0, 0.75, 0.5})
    for (const char* t : {"exact", "cmfa", "cspa"}) {
      if (!first) gp += ", \\\n     ";
      first = false;
      gp += fmt::format("'fig5_limit_temperature.csv' using 5:{} with lines title '{} gamma={}'",
                        pick(t, 4, g, "$8"), t, io::num(g));
    }
  gp += "\nset title 'b=0'\nset xlabel 'T/v'\nset ylabel 'nC'\nplot ";
  first = true;
  for (double g : {1.0, 0.5})
    for (int n : {20, 100, 1000})
      for (const char* t : {"exact", "cmfa"}) {
        if (!first) gp += ", \\\n     ";
        first = false;
        gp += fmt::format(
            "'fig5_temperature.csv' using 6:(strcol(1) eq '{}' && $2 == {} && $4 == {} ? $12 : 1/0) "
            "with lines title '{} n={} gamma={}'",
            t, n, io::num(g), t, n, io::num(g));
      }
  gp += "\nunset multiplot\n";
  w.open("fig5.gp") << gp;
}

}  // namespace detail

/// Writes the data and script for figure `id` (1..5) into `out_dir`.
inline FigureOutput reproduce_figure(int id, const std::filesystem::path& out_dir, unsigned threads = 0) {
  if (id < 1 || id > 5) throw std::invalid_argument("figure id must be in 1..5");
  FigureOutput out;
  detail::Writer w(out_dir, out);
  switch (id) {
    case 1: detail::figure1(w, out, threads); break;
    case 2: detail::figure2(w, out, threads); break;
    case 3: detail::figure3(w, out, threads); break;
    case 4: detail::figure4(w, out, threads); break;
    case 5: detail::figure5(w, out, threads); break;
  }
  return out;
}

}  // namespace xxzent::figures

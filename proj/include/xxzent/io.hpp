#pragma once

// CSV / JSON writers for sweep and limit results. Missing values are empty
// CSV fields or JSON nulls.

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "analysis.hpp"

namespace xxzent::io {

inline constexpr const char* kCsvHeader = "tier,n,v,gamma,b,T,logZ,Sz,Sz2,S2,C,nC,EoF,status";

inline std::string num(double x) {
  if (!std::isfinite(x)) return {};
  return fmt::format("{:.12g}", x == 0.0 ? 0.0 : x);  // no "-0"
}

inline std::string num(std::optional<double> x) { return x ? num(*x) : std::string(); }

struct Row {
  std::optional<double> logZ, sz, sz2, s2, c, nc, eof;
};

inline Row row_values(const analysis::CurvePoint& pt) {
  Row r;
  auto finite = [](double x) { return std::isfinite(x) ? std::optional<double>(x) : std::nullopt; };
  if (pt.has_moments) {
    r.logZ = finite(pt.moments.logZ);
    r.sz = finite(pt.moments.sz);
    r.sz2 = finite(pt.moments.sz2);
    r.s2 = finite(pt.moments.s2);
  }
  if (pt.concurrence) {
    r.c = pt.concurrence->concurrence;
    r.nc = pt.params.n * pt.concurrence->concurrence;
    r.eof = pt.concurrence->eof;
  }
  return r;
}

inline std::string csv_row(const analysis::CurvePoint& pt) {
  const auto& p = pt.params;
  const Row r = row_values(pt);
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(pt.tier), p.n, num(p.v),
                     num(p.gamma), num(p.b), num(p.T), num(r.logZ), num(r.sz), num(r.sz2), num(r.s2),
                     num(r.c), num(r.nc), num(r.eof), to_string(pt.status));
}

inline void write_csv(std::ostream& os, const std::vector<analysis::CurvePoint>& pts, bool header = true) {
  if (header) os << kCsvHeader << '\n';
  for (const auto& pt : pts) os << csv_row(pt) << '\n';
}

inline nlohmann::json spec_json(const analysis::SweepSpec& s) {
  nlohmann::json j;
  j["tier"] = std::string(to_string(s.tier));
  j["n"] = s.fixed.n;
  j["v"] = s.fixed.v;
  j["gamma"] = s.fixed.gamma;
  j["b"] = s.fixed.b;
  j["T"] = s.fixed.T;
  j["grid"] = nlohmann::json::array();
  for (const auto& a : s.grid)
    j["grid"].push_back({{"axis", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count},
                         {"spacing", a.log ? "log" : "lin"}});
  return j;
}

inline nlohmann::json point_json(const analysis::CurvePoint& pt) {
  auto opt = [](std::optional<double> x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
  const Row r = row_values(pt);
  const auto& p = pt.params;
  return {{"tier", std::string(to_string(pt.tier))},
          {"n", p.n},
          {"v", p.v},
          {"gamma", p.gamma},
          {"b", p.b},
          {"T", p.T},
          {"logZ", opt(r.logZ)},
          {"Sz", opt(r.sz)},
          {"Sz2", opt(r.sz2)},
          {"S2", opt(r.s2)},
          {"C", opt(r.c)},
          {"nC", opt(r.nc)},
          {"EoF", opt(r.eof)},
          {"status", std::string(to_string(pt.status))}};
}

inline void write_json(std::ostream& os, const nlohmann::json& spec, const std::vector<analysis::CurvePoint>& pts) {
  nlohmann::json j;
  j["spec"] = spec;
  j["points"] = nlohmann::json::array();
  for (const auto& pt : pts) j["points"].push_back(point_json(pt));
  os << j.dump(2) << '\n';
}

// Limit results: one row per scan.

inline constexpr const char* kLimitHeader = "tier,n,v,gamma,b,T,variable,limit,at_edge,zero,intervals,onsets,failed";

inline std::string limit_row(const analysis::LimitResult& r) {
  const auto& p = r.params;
  std::string bands, onsets;
  for (const auto& iv : r.intervals) {
    if (!bands.empty()) bands += ';';
    bands += num(iv.lo) + ':' + num(iv.hi);
  }
  for (double x : r.onsets) {
    if (!onsets.empty()) onsets += ';';
    onsets += num(x);
  }
  const bool scans_b = r.variable == "b";
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(r.tier), p.n, num(p.v), num(p.gamma),
                     scans_b ? std::string() : num(p.b), scans_b ? num(p.T) : std::string(), r.variable,
                     num(r.limit), r.limit_at_edge ? 1 : 0, r.zero_entanglement ? 1 : 0, bands, onsets,
                     r.failed_probes);
}

inline void write_limit_csv(std::ostream& os, const std::vector<analysis::LimitResult>& rs) {
  os << kLimitHeader << '\n';
  for (const auto& r : rs) os << limit_row(r) << '\n';
}

inline nlohmann::json limit_json(const analysis::LimitResult& r) {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& iv : r.intervals)
    bands.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"lo_at_edge", iv.lo_at_edge}, {"hi_at_edge", iv.hi_at_edge},
                     {"lo_sign_change", iv.lo_sign_change}, {"hi_sign_change", iv.hi_sign_change}});
  const auto& p = r.params;
  return {{"tier", std::string(to_string(r.tier))},
          {"n", p.n},
          {"v", p.v},
          {"gamma", p.gamma},
          {r.variable == "b" ? "T" : "b", r.variable == "b" ? p.T : p.b},
          {"variable", r.variable},
          {"limit", std::isfinite(r.limit) ? nlohmann::json(r.limit) : nlohmann::json(nullptr)},
          {"at_edge", r.limit_at_edge},
          {"zero_entanglement", r.zero_entanglement},
          {"intervals", bands},
          {"onsets", r.onsets},
          {"failed_probes", r.failed_probes},
          {"probes", r.probes}};
}

}  // namespace xxzent::io

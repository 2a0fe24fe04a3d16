// Concurrence of 20 spins at T = 0.1 v across the tiers, then the exact limit
// temperature at a strong field.

#include <fmt/format.h>

#include "xxzent/xxzent.hpp"

int main() {
  using namespace xxzent;
  const ModelParams p{20, 1.0, 1.0, 0.5, 0.1};

  fmt::print("n={} gamma={} b={} T={}\n", p.n, p.gamma, p.b, p.T);
  for (Tier t : {Tier::exact, Tier::cspa, Tier::cmfa, Tier::mfa}) {
    const auto pt = analysis::evaluate_point(p, t);
    if (pt.concurrence)
      fmt::print("  {:6} nC = {:.6f}  <Sz> = {:+.6f}\n", to_string(t), p.n * pt.concurrence->concurrence,
                 pt.moments.sz);
    else
      fmt::print("  {:6} {}\n", to_string(t), to_string(pt.status));
  }

  const auto lt = analysis::limit_temperature(p.with_b(2.0), Tier::exact);
  fmt::print("exact limit temperature at b = 2v: {:.6f} v\n", lt.limit);
  return 0;
}

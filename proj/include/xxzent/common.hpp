#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace xxzent {

/// Spin quantum number stored as twice its value, so half-integers stay exact.
struct HalfInt {
  int twice = 0;

  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
  constexpr double value() const { return 0.5 * twice; }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
};

enum class Tier { bruteforce, exact, cspa, spa, cmfa, mfa };

enum class Status { ok, not_applicable, breakdown, error };

inline std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::bruteforce: return "bruteforce";
    case Tier::exact: return "exact";
    case Tier::cspa: return "cspa";
    case Tier::spa: return "spa";
    case Tier::cmfa: return "cmfa";
    case Tier::mfa: return "mfa";
  }
  return "?";
}

inline Tier parse_tier(std::string_view s) {
  if (s == "bruteforce") return Tier::bruteforce;
  if (s == "exact") return Tier::exact;
  if (s == "cspa") return Tier::cspa;
  if (s == "spa") return Tier::spa;
  if (s == "cmfa") return Tier::cmfa;
  if (s == "mfa") return Tier::mfa;
  throw std::invalid_argument("unknown tier '" + std::string(s) + "'");
}

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::not_applicable: return "not-applicable";
    case Status::breakdown: return "breakdown";
    case Status::error: return "error";
  }
  return "?";
}

// Error types. Everything derives from std::runtime_error / std::domain_error so
// callers that do not care can catch the standard bases.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The RPA validity condition omega^2 + (2 pi T)^2 > 0 failed somewhere.
class BreakdownError : public std::runtime_error {
 public:
  BreakdownError(const std::string& what, double r = 0.0, double z = 0.0)
      : std::runtime_error(what), r_(r), z_(z) {}
  double r() const { return r_; }
  double z() const { return z_; }

 private:
  double r_;
  double z_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Collective moments that do not correspond to a positive semidefinite pair state.
class InconsistentMoments : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xxzent

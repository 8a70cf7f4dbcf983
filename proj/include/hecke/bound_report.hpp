#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hecke/numeric.hpp"

namespace hecke {

/// Parameters that produced a check. Unused fields stay empty.
struct CheckContext {
  std::optional<std::uint64_t> x;
  std::optional<double> y;
  std::optional<std::uint64_t> d;
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> n;
  std::optional<unsigned> j;
  std::optional<std::uint64_t> k;
};

/// One verified inequality instance lhs <= rhs.
struct BoundReport {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  /// Set when the inequality holds for trivial reasons (empty class, F = 0).
  bool vacuous = false;
  CheckContext context;
  /// Free-form caveat, e.g. that y is below the range the constants target.
  std::string warning;
};

inline BoundReport make_report(std::string label, double lhs, double rhs, CheckContext context) {
  BoundReport r;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = within_bound(lhs, rhs);
  r.context = std::move(context);
  return r;
}

inline BoundReport make_vacuous_report(std::string label, CheckContext context, std::string why) {
  BoundReport r;
  r.label = std::move(label);
  r.pass = true;
  r.vacuous = true;
  r.context = std::move(context);
  r.warning = std::move(why);
  return r;
}

}  // namespace hecke

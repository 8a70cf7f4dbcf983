#pragma once

// Verification of the mass-ratio inequalities for a materialized sequence:
// the pointwise prime bounds, the divisibility bounds for d | n and d^2 | n,
// the dyadic partition of primes near sqrt(y) with the associated counting
// bounds, the global bound F(y) <= 1e8 (1 + log y) / sqrt(y), and a
// diagnostic trace of the two-case contradiction argument.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/bound_report.hpp"
#include "hecke/hecke_sequence.hpp"
#include "hecke/number_theory.hpp"
#include "hecke/numeric.hpp"

namespace hecke {

/// Below this y the numeric constants of the argument are not claimed.
inline constexpr double kLargeYThreshold = 1e16;
inline constexpr double kTheorem3Constant = 1e8;

inline std::string small_y_warning(double y) {
  return y < kLargeYThreshold ? "constants of the argument assume y >= 1e16" : std::string{};
}

/// 0 for |f(p)| <= 1/2, otherwise the j >= 1 with 2^(j-2) < |f(p)| <= 2^(j-1).
inline unsigned dyadic_class(double abs_fp) {
  if (!(abs_fp >= 0.0) || !std::isfinite(abs_fp)) throw std::invalid_argument("dyadic_class needs finite |f(p)|");
  if (abs_fp <= 0.5) return 0;
  unsigned j = 1;
  while (abs_fp > std::ldexp(1.0, static_cast<int>(j) - 1)) ++j;
  return j;
}

/// J = floor(log(1/F) / (4 log 2)) + 3.
inline unsigned partition_depth(double F) {
  if (!(F > 0.0) || F > 1.0) throw std::domain_error("partition depth needs 0 < F(y) <= 1");
  return static_cast<unsigned>(std::floor(std::log2(1.0 / F) / 4.0)) + 3;
}

/// Primes in [sqrt(y)/2, sqrt(y)] split into P_0 .. P_J by |f(p)|.
struct PrimePartition {
  double y = 0.0;
  double F_y = 0.0;
  unsigned J = 0;
  std::vector<std::uint64_t> primes;
  std::vector<unsigned> classes;
  std::vector<std::vector<std::uint64_t>> sets;
  std::string warning;

  [[nodiscard]] const std::vector<std::uint64_t>& set(unsigned j) const {
    if (j > J) throw std::out_of_range("class index beyond J");
    return sets[j];
  }

  [[nodiscard]] std::optional<unsigned> class_of(std::uint64_t p) const {
    const auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p) return std::nullopt;
    return classes[static_cast<std::size_t>(it - primes.begin())];
  }
};

inline PrimePartition partition_primes(const HeckeSequence& seq, double y) {
  if (!(y >= 4.0)) throw std::invalid_argument("partition_primes requires y >= 4");
  const MassRatio F = mass_ratio(seq, y);
  if (!(F.value > 0.0)) throw std::domain_error("F(y) = 0 (y > x): the partition depth is undefined");
  PrimePartition out;
  out.y = y;
  out.F_y = F.value;
  out.J = partition_depth(F.value);
  out.warning = small_y_warning(y);
  const double root = std::sqrt(y);
  out.primes = primes_in_range(std::max(2.0, root / 2.0), root, std::max(seq.x_max(), sieve_ceiling())).primes;
  out.sets.assign(out.J + 1, {});
  out.classes.reserve(out.primes.size());
  for (const std::uint64_t p : out.primes) {
    const unsigned j = dyadic_class(seq.abs_value(static_cast<std::int64_t>(p)));
    // |f(p)| <= 2 F(p^2)^(-1/4) <= 2^(J-1) keeps every prime inside the classes
    if (j > out.J) throw std::logic_error("prime " + std::to_string(p) + " falls above class J");
    out.classes.push_back(j);
    out.sets[j].push_back(p);
  }
  return out;
}

/// Per-n counts of distinct primes of each P_j dividing n (j >= 1) and of
/// distinct p in P_0 with p^2 | n.
struct SmoothnessCount {
  std::uint64_t n = 1;
  std::vector<unsigned> distinct_primes_in;  // indexed by class, entry 0 unused
  unsigned distinct_prime_squares_in_zero = 0;

  [[nodiscard]] unsigned count(unsigned j) const {
    return j == 0 ? distinct_prime_squares_in_zero : distinct_primes_in.at(j);
  }
};

inline SmoothnessCount smoothness_count(const PrimePartition& part, std::uint64_t n) {
  SmoothnessCount out;
  out.n = n;
  out.distinct_primes_in.assign(part.J + 1, 0);
  for (const auto& [p, e] : factorize(n, std::max(n, sieve_ceiling())).factors) {
    const auto j = part.class_of(p);
    if (!j) continue;
    if (*j == 0) {
      if (e >= 2) ++out.distinct_prime_squares_in_zero;
    } else {
      ++out.distinct_primes_in[*j];
    }
  }
  return out;
}

/// n in N_j(k)
inline bool in_class_set(const SmoothnessCount& c, unsigned j, std::uint64_t k) { return c.count(j) <= k; }

/// Sieved version of SmoothnessCount::count(j) for all n in [0, limit].
inline std::vector<std::uint16_t> class_counts(const PrimePartition& part, unsigned j, std::uint64_t limit) {
  std::vector<std::uint16_t> counts(limit + 1, 0);
  for (const std::uint64_t p : part.set(j)) {
    const std::uint64_t step = j == 0 ? p * p : p;
    for (std::uint64_t m = step; m <= limit; m += step) ++counts[m];
  }
  return counts;
}

/// Mass of n <= limit split by membership in N_j(k).
struct ClassSplit {
  double inside = 0.0;
  double outside = 0.0;
};

inline ClassSplit class_split(const HeckeSequence& seq, const PrimePartition& part, unsigned j, std::uint64_t k,
                              std::uint64_t limit) {
  const auto counts = class_counts(part, j, limit);
  CompensatedSum inside;
  CompensatedSum outside;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    const double w = std::norm(seq.value(static_cast<std::int64_t>(n)));
    (counts[n] <= k ? inside : outside).add(w);
  }
  return {inside.value(), outside.value()};
}

// ---------------------------------------------------------------------------
// Pointwise prime bounds

/// |f(p)| <= 2 / F(p)^(1/2) for prime p <= x.
inline BoundReport check_lemma31_first(const HeckeSequence& seq, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (p > seq.x_max()) throw std::out_of_range("the pointwise prime bound needs p <= x");
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.p = p;
  const double F = mass_ratio(seq, static_cast<double>(p)).value;
  if (!(F > 0.0)) return make_vacuous_report("lemma31_first", ctx, "F(p) = 0");
  return make_report("lemma31_first", seq.abs_value(static_cast<std::int64_t>(p)), 2.0 / std::sqrt(F), ctx);
}

/// For p^2 <= x: |f(p)| <= 2 / F(p^2)^(1/4), followed by the two
/// intermediate steps |f(p^2)| <= 3 / F(p^2)^(1/2) and |f(p)|^2 <= |f(p^2)| + 1.
inline std::vector<BoundReport> check_lemma31_second(const HeckeSequence& seq, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (p > seq.x_max() / p) throw std::out_of_range("the squared-prime bound needs p^2 <= x");
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.p = p;
  const double F = mass_ratio(seq, static_cast<double>(p * p)).value;
  if (!(F > 0.0)) return {make_vacuous_report("lemma31_second", ctx, "F(p^2) = 0")};
  const double fp = seq.abs_value(static_cast<std::int64_t>(p));
  const double fp2 = seq.abs_value(static_cast<std::int64_t>(p * p));
  return {make_report("lemma31_second", fp, 2.0 / std::pow(F, 0.25), ctx),
          make_report("lemma31_second_square_value", fp2, 3.0 / std::sqrt(F), ctx),
          make_report("lemma31_second_square_step", fp * fp, fp2 + 1.0, ctx)};
}

// ---------------------------------------------------------------------------
// Divisibility bounds

/// sum_{n <= x/y, d | n} |f(n)|^2 <= tau(d) prod_{p|d} (1 + |f(p)|^2) F(yd) S(x)
inline BoundReport check_prop32_squarefree(const HeckeSequence& seq, double y, std::uint64_t d) {
  if (!(y >= 1.0)) throw std::invalid_argument("y must be >= 1");
  if (d == 0) throw std::invalid_argument("d must be positive");
  const FactoredInteger fd = factorize(d, std::max(d, sieve_ceiling()));
  if (!fd.is_squarefree()) throw std::invalid_argument(std::to_string(d) + " is not square-free");
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.y = y;
  ctx.d = d;
  const std::uint64_t limit = floor_quotient(seq.x_max(), y);
  const std::uint64_t inner = limit / d;  // floor(x / (y d))
  if (inner == 0) return make_vacuous_report("prop32_squarefree", ctx, "no multiple of d below x/y");
  CompensatedSum lhs;
  for (std::uint64_t n = d; n <= limit; n += d) lhs.add(std::norm(seq.value(static_cast<std::int64_t>(n))));
  double coefficient = static_cast<double>(tau(fd));
  for (const auto& [p, e] : fd.factors) coefficient *= 1.0 + std::norm(seq.value(static_cast<std::int64_t>(p)));
  return make_report("prop32_squarefree", lhs.value(), coefficient * seq.prefix_sq(inner), ctx);
}

/// sum_{n <= x/y, d^2 | n} |f(n)|^2 <= tau_3(d) prod_{p|d} (2 + |f(p^2)|^2) F(yd^2) S(x),
/// for square-free d.
inline BoundReport check_prop32_square(const HeckeSequence& seq, double y, std::uint64_t d) {
  if (!(y >= 1.0)) throw std::invalid_argument("y must be >= 1");
  if (d == 0) throw std::invalid_argument("d must be positive");
  const FactoredInteger fd = factorize(d, std::max(d, sieve_ceiling()));
  if (!fd.is_squarefree()) throw std::invalid_argument(std::to_string(d) + " is not square-free");
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.y = y;
  ctx.d = d;
  const std::uint64_t limit = floor_quotient(seq.x_max(), y);
  if (d > limit / d) return make_vacuous_report("prop32_square", ctx, "no multiple of d^2 below x/y");
  const std::uint64_t d2 = d * d;
  const std::uint64_t inner = limit / d2;
  CompensatedSum lhs;
  for (std::uint64_t n = d2; n <= limit; n += d2) lhs.add(std::norm(seq.value(static_cast<std::int64_t>(n))));
  double coefficient = static_cast<double>(tau3(fd));
  for (const auto& [p, e] : fd.factors) {
    coefficient *= 2.0 + std::norm(seq.value(static_cast<std::int64_t>(p * p)));
  }
  return make_report("prop32_square", lhs.value(), coefficient * seq.prefix_sq(inner), ctx);
}

// ---------------------------------------------------------------------------
// Counting bounds over the prime partition

/// For 2 <= k <= |P_0|/4: sum_{n <= x/y, n in N_0(k)} |f(n)|^2 <= (4k / |P_0|) S(x).
inline BoundReport check_prop33_zero(const HeckeSequence& seq, const PrimePartition& part, std::uint64_t k) {
  const std::size_t size = part.set(0).size();
  if (k < 2 || 4 * k > size) {
    throw std::invalid_argument("the P_0 counting bound requires 2 <= k <= |P_0|/4, got k = " + std::to_string(k) +
                                ", |P_0| = " + std::to_string(size));
  }
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.y = part.y;
  ctx.j = 0;
  ctx.k = k;
  const auto split = class_split(seq, part, 0, k, floor_quotient(seq.x_max(), part.y));
  auto r = make_report("prop33_zero", split.inside,
                       4.0 * static_cast<double>(k) / static_cast<double>(size) * seq.total_mass(), ctx);
  r.warning = part.warning;
  return r;
}

inline BoundReport check_prop33_zero(const HeckeSequence& seq, double y, std::uint64_t k) {
  return check_prop33_zero(seq, partition_primes(seq, y), k);
}

/// For 1 <= j <= J and 1 <= k <= |P_j|/4 - 1:
/// sum_{n <= x/y, n in N_j(k)} |f(n)|^2 <= 2^12 k^2 / (2^{4j} |P_j|^2) S(x).
inline BoundReport check_prop33_j(const HeckeSequence& seq, const PrimePartition& part, unsigned j,
                                  std::uint64_t k) {
  if (j < 1 || j > part.J) {
    throw std::invalid_argument("the counting bound requires 1 <= j <= J = " + std::to_string(part.J));
  }
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.y = part.y;
  ctx.j = j;
  ctx.k = k;
  const std::size_t size = part.set(j).size();
  if (size == 0) return make_vacuous_report("prop33_j", ctx, "P_j is empty");
  if (k < 1 || 4 * (k + 1) > size) {
    throw std::invalid_argument("the P_j counting bound requires 1 <= k <= |P_j|/4 - 1, got k = " + std::to_string(k) +
                                ", |P_j| = " + std::to_string(size));
  }
  const auto split = class_split(seq, part, j, k, floor_quotient(seq.x_max(), part.y));
  const double kd = static_cast<double>(k);
  const double sd = static_cast<double>(size);
  const double factor = std::ldexp(kd * kd / (sd * sd), 12 - 4 * static_cast<int>(j));
  auto r = make_report("prop33_j", split.inside, factor * seq.total_mass(), ctx);
  r.warning = part.warning;
  return r;
}

inline BoundReport check_prop33_j(const HeckeSequence& seq, double y, unsigned j, std::uint64_t k) {
  return check_prop33_j(seq, partition_primes(seq, y), j, k);
}

// ---------------------------------------------------------------------------
// Global bound

struct Theorem3Check {
  BoundReport report;
  double mass_ratio = 0.0;
  /// F(y) sqrt(y) / (1 + log y): the constant the data actually needs.
  double observed_constant = 0.0;
};

/// S(x/y) <= 1e8 (1 + log y) / sqrt(y) S(x) for 1 <= y <= x.
template <PrefixSource S>
Theorem3Check check_theorem3(const S& seq, double y) {
  if (!(y >= 1.0) || y > static_cast<double>(seq.x_max())) {
    throw std::invalid_argument("the mass-ratio bound is stated for 1 <= y <= x");
  }
  const MassRatio F = mass_ratio(seq, y);
  const double shape = (1.0 + std::log(y)) / std::sqrt(y);
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.y = y;
  Theorem3Check out;
  out.report = make_report("theorem3", F.numerator, kTheorem3Constant * shape * F.denominator, ctx);
  out.mass_ratio = F.value;
  out.observed_constant = F.value / shape;
  return out;
}

// ---------------------------------------------------------------------------
// Case analysis trace

enum class ProofCase { zero_class, dyadic_class, none };

inline const char* to_string(ProofCase c) {
  switch (c) {
    case ProofCase::zero_class: return "case1";
    case ProofCase::dyadic_class: return "case2";
    case ProofCase::none: return "none";
  }
  return "none";
}

/// Numeric mirror of the contradiction argument at one (f, x, y). Nothing
/// here is asserted; for genuine Hecke-multiplicative f the exceptional
/// branch is never reached.
struct ProofTrace {
  std::uint64_t x = 0;
  double y = 0.0;
  double F_y = 0.0;
  unsigned J = 0;
  std::vector<std::size_t> class_sizes;
  std::size_t prime_count = 0;
  /// sqrt(y) / (2 log y), a lower bound for |P(y)| once y >= 1e16.
  double chebyshev_lower = 0.0;
  bool chebyshev_asserted = false;
  bool chebyshev_holds = false;
  double case1_threshold = 0.0;  // sqrt(y) / (4 log y)
  double case2_threshold = 0.0;  // sqrt(y) / (4 J log y)
  ProofCase selected = ProofCase::none;
  std::optional<unsigned> j;
  std::uint64_t K = 0;
  /// Whether K satisfies the counting bound's range for the selected class.
  bool K_admissible = false;
  double mass_inside = 0.0;   // n <= x/y in N(K)
  double mass_outside = 0.0;  // n <= x/y outside N(K)
  double half_F_mass = 0.0;   // F(y) S(x) / 2
  /// log10 of the divisibility-side upper bound for the outside mass; -inf
  /// when the F factor vanishes because its argument exceeds x.
  double outside_bound_log10 = -std::numeric_limits<double>::infinity();
  std::string warning;
};

namespace detail {

inline double log10_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(10.0);
}

// log10(S(x) F(exp(log_arg))), -inf when the argument exceeds x
inline double log10_mass_above(const HeckeSequence& seq, double log_arg) {
  if (log_arg > std::log(static_cast<double>(seq.x_max()))) return -std::numeric_limits<double>::infinity();
  const double numerator = mass_ratio(seq, std::exp(log_arg)).numerator;
  return numerator > 0.0 ? std::log10(numerator) : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline ProofTrace proof_trace(const HeckeSequence& seq, double y) {
  const PrimePartition part = partition_primes(seq, y);
  ProofTrace t;
  t.x = seq.x_max();
  t.y = y;
  t.F_y = part.F_y;
  t.J = part.J;
  t.warning = part.warning;
  t.prime_count = part.primes.size();
  for (const auto& s : part.sets) t.class_sizes.push_back(s.size());
  const double log_y = std::log(y);
  const double root = std::sqrt(y);
  t.chebyshev_lower = root / (2.0 * log_y);
  t.chebyshev_holds = static_cast<double>(t.prime_count) >= t.chebyshev_lower;
  t.chebyshev_asserted = y >= kLargeYThreshold;
  t.case1_threshold = root / (4.0 * log_y);
  t.case2_threshold = root / (4.0 * static_cast<double>(t.J) * log_y);
  const std::uint64_t limit = floor_quotient(seq.x_max(), y);
  t.half_F_mass = 0.5 * part.F_y * seq.total_mass();

  const double p0 = static_cast<double>(t.class_sizes[0]);
  if (p0 >= t.case1_threshold) {
    t.selected = ProofCase::zero_class;
    t.K = static_cast<std::uint64_t>(std::floor(p0 * part.F_y / 8.0));
    t.K_admissible = t.K >= 2 && 4 * t.K <= t.class_sizes[0];
    const auto split = class_split(seq, part, 0, t.K, limit);
    t.mass_inside = split.inside;
    t.mass_outside = split.outside;
    // C(|P_0|, K+1) 9^{K+1} F(y (y/4)^{K+1}) S(x)
    const double kk = static_cast<double>(t.K + 1);
    t.outside_bound_log10 = detail::log10_binomial(p0, kk) + kk * std::log10(9.0) +
                            detail::log10_mass_above(seq, log_y + kk * std::log(y / 4.0));
    return t;
  }
  for (unsigned j = 1; j <= t.J; ++j) {
    const double pj = static_cast<double>(t.class_sizes[j]);
    if (pj == 0.0 || pj < t.case2_threshold) continue;
    t.selected = ProofCase::dyadic_class;
    t.j = j;
    t.K = static_cast<std::uint64_t>(std::floor(std::ldexp(pj * std::sqrt(part.F_y), 2 * static_cast<int>(j) - 9)));
    t.K_admissible = t.K >= 1 && 4 * (t.K + 1) <= t.class_sizes[j];
    const auto split = class_split(seq, part, j, t.K, limit);
    t.mass_inside = split.inside;
    t.mass_outside = split.outside;
    // C(|P_j|, K+1) 2^{2j(K+1)} F(y (sqrt(y)/2)^{K+1}) S(x)
    const double kk = static_cast<double>(t.K + 1);
    t.outside_bound_log10 = detail::log10_binomial(pj, kk) + 2.0 * j * kk * std::log10(2.0) +
                            detail::log10_mass_above(seq, log_y + kk * std::log(root / 2.0));
    return t;
  }
  return t;
}

}  // namespace hecke

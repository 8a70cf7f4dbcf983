#pragma once

// Prime enumeration, factorization and divisor counting.
//
// Everything here is bounded by a sieve ceiling (default 10^8, overridable
// through the HECKE_SIEVE_CEILING environment variable). Requests beyond the
// ceiling throw instead of truncating.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hecke {

inline constexpr std::uint64_t kDefaultSieveCeiling = 100'000'000;

/// Active sieve ceiling: HECKE_SIEVE_CEILING if set to a positive integer,
/// otherwise 10^8.
inline std::uint64_t sieve_ceiling() {
  const char* env = std::getenv("HECKE_SIEVE_CEILING");
  if (env == nullptr || *env == '\0') return kDefaultSieveCeiling;
  char* end = nullptr;
  const double parsed = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(parsed >= 1.0) || parsed > 1e15) {
    throw std::invalid_argument(std::string("HECKE_SIEVE_CEILING is not a positive integer: ") + env);
  }
  return static_cast<std::uint64_t>(parsed);
}

inline void require_within_ceiling(std::uint64_t n, std::uint64_t ceiling, const char* what) {
  if (n > ceiling) {
    throw std::out_of_range(std::string(what) + " = " + std::to_string(n) +
                            " exceeds the sieve ceiling " + std::to_string(ceiling));
  }
}

/// floor(sqrt(n)) computed exactly.
constexpr std::uint64_t isqrt(std::uint64_t n) {
  if (n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Plain sieve of Eratosthenes, all primes <= limit.
inline std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

/// Primes up to sqrt(ceiling); enough to factor or sieve anything below it.
inline const std::vector<std::uint32_t>& base_primes_for(std::uint64_t ceiling) {
  // Cached for the default ceiling; other ceilings get a per-call list.
  static const std::vector<std::uint32_t> default_base =
      small_primes(static_cast<std::uint32_t>(isqrt(kDefaultSieveCeiling)));
  if (isqrt(ceiling) <= isqrt(kDefaultSieveCeiling)) return default_base;
  thread_local std::vector<std::uint32_t> custom;
  thread_local std::uint64_t custom_for = 0;
  if (custom_for != ceiling) {
    custom = small_primes(static_cast<std::uint32_t>(isqrt(ceiling)));
    custom_for = ceiling;
  }
  return custom;
}

/// The primes p with lo <= p <= hi. Endpoints are real; membership uses
/// ceil(lo) <= p <= floor(hi).
struct PrimeRange {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> primes;

  [[nodiscard]] std::size_t size() const { return primes.size(); }
  [[nodiscard]] bool empty() const { return primes.empty(); }
  [[nodiscard]] bool contains(std::uint64_t p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
  }
};

/// Segmented sieve of Eratosthenes over [ceil(lo), floor(hi)].
inline PrimeRange primes_in_range(double lo, double hi, std::uint64_t ceiling = sieve_ceiling()) {
  if (!(lo >= 2.0) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument("primes_in_range requires 2 <= lo <= hi");
  }
  if (hi >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    throw std::out_of_range("primes_in_range: hi exceeds integer range");
  }
  PrimeRange out{lo, hi, {}};
  const auto first = static_cast<std::uint64_t>(std::ceil(lo));
  const auto last = static_cast<std::uint64_t>(std::floor(hi));
  require_within_ceiling(last, ceiling, "primes_in_range hi");
  if (first > last) return out;

  const auto& base = base_primes_for(ceiling);
  constexpr std::uint64_t kSegment = 1 << 16;
  std::vector<char> composite;
  for (std::uint64_t seg_lo = first; seg_lo <= last; seg_lo += kSegment) {
    const std::uint64_t seg_hi = std::min(last, seg_lo + kSegment - 1);
    composite.assign(seg_hi - seg_lo + 1, 0);
    for (const std::uint64_t p : base) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= seg_hi; m += p) composite[m - seg_lo] = 1;
    }
    for (std::uint64_t n = seg_lo; n <= seg_hi; ++n) {
      if (n >= 2 && !composite[n - seg_lo]) out.primes.push_back(n);
    }
  }
  return out;
}

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n together with its canonical factorization (primes strictly increasing).
struct FactoredInteger {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;

  [[nodiscard]] bool is_squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
  }
};

inline FactoredInteger factorize(std::uint64_t n, std::uint64_t ceiling = sieve_ceiling()) {
  if (n == 0) throw std::invalid_argument("factorize requires n >= 1");
  require_within_ceiling(n, ceiling, "factorize n");
  FactoredInteger out{n, {}};
  std::uint64_t rest = n;
  for (const std::uint64_t p : base_primes_for(ceiling)) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  if (rest > 1) out.factors.push_back({rest, 1});
  return out;
}

/// Number of divisors, prod(e_i + 1).
inline std::uint64_t tau(const FactoredInteger& f) {
  std::uint64_t t = 1;
  for (const auto& [p, e] : f.factors) t *= e + 1;
  return t;
}

inline std::uint64_t tau(std::uint64_t n) { return tau(factorize(n, std::max(n, sieve_ceiling()))); }

/// Ordered factorizations n = abc, prod C(e_i + 2, 2).
inline std::uint64_t tau3(const FactoredInteger& f) {
  std::uint64_t t = 1;
  for (const auto& [p, e] : f.factors) t *= std::uint64_t{e + 2} * (e + 1) / 2;
  return t;
}

inline std::uint64_t tau3(std::uint64_t n) { return tau3(factorize(n, std::max(n, sieve_ceiling()))); }

inline bool is_squarefree(std::uint64_t n) { return factorize(n, std::max(n, sieve_ceiling())).is_squarefree(); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  const auto f = factorize(n, std::max(n, sieve_ceiling()));
  return f.factors.size() == 1 && f.factors.front().exponent == 1;
}

/// Divisors of n in increasing order.
inline std::vector<std::uint64_t> divisors(const FactoredInteger& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t count = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) a = std::exchange(b, a % b);
  return a;
}

}  // namespace hecke

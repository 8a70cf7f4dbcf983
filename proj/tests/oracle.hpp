#pragma once

// Brute-force reference implementations used only by tests. Nothing here
// calls into the sieve, the prime-power recurrence or the quadrature code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

inline std::uint64_t count_divisors(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

inline std::uint64_t count_ordered_triples(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a <= n; ++a) {
    if (n % a != 0) continue;
    const std::uint64_t bc = n / a;
    for (std::uint64_t b = 1; b <= bc; ++b) c += bc % b == 0;
  }
  return c;
}

inline double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// f(p^k) = U_k(f(p)/2) = sum_i (-1)^i C(k-i, i) f(p)^(k-2i), the closed
/// Chebyshev form rather than the three-term recurrence.
inline std::complex<double> prime_power(std::complex<double> fp, unsigned k) {
  std::complex<double> total{0.0};
  for (unsigned i = 0; 2 * i <= k; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    total += sign * binomial(k - i, i) * std::pow(fp, static_cast<int>(k - 2 * i));
  }
  return total;
}

using PrimeValues = std::function<std::complex<double>(std::uint64_t)>;

/// f(n) by trial-division factorization and the closed form above.
inline std::complex<double> hecke_value(const PrimeValues& fp, std::uint64_t n) {
  std::complex<double> v{1.0};
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) v *= prime_power(fp(p), e);
  }
  if (n > 1) v *= fp(n);
  return v;
}

/// |f(n)|^2 for n = 0..x (index 0 is zero).
inline std::vector<long double> squared_values(const PrimeValues& fp, std::uint64_t x) {
  std::vector<long double> out(x + 1, 0.0L);
  for (std::uint64_t n = 1; n <= x; ++n) out[n] = std::norm(hecke_value(fp, n));
  return out;
}

/// Plain long double summation of w[1..t].
inline long double mass(const std::vector<long double>& w, std::uint64_t t) {
  long double s = 0.0L;
  for (std::uint64_t n = 1; n <= t && n < w.size(); ++n) s += w[n];
  return s;
}

/// floor(x / y) by stepping q upward.
inline std::uint64_t floor_div(std::uint64_t x, double y) {
  std::uint64_t q = 0;
  while (static_cast<long double>(q + 1) * static_cast<long double>(y) <= static_cast<long double>(x)) ++q;
  return q;
}

/// Composite Simpson rule with n (even) intervals.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// K_0(u): power series in long double for u <= 12, asymptotic expansion
/// beyond.
inline double bessel_k0(double u) {
  if (u <= 12.0) {
    const long double z = static_cast<long double>(u) * u / 4.0L;
    const long double gamma = 0.577215664901532860606512090082402431L;
    long double term = 1.0L;  // (z^k / k!^2)
    long double harmonic = 0.0L;
    long double i0 = 0.0L;
    long double tail = 0.0L;
    for (int k = 0; k < 200; ++k) {
      if (k > 0) {
        term *= z / (static_cast<long double>(k) * k);
        harmonic += 1.0L / k;
      }
      i0 += term;
      tail += term * harmonic;
      if (k > 5 && term < 1e-30L * i0) break;
    }
    return static_cast<double>(-(std::log(static_cast<long double>(u) / 2.0L) + gamma) * i0 + tail);
  }
  // sqrt(pi / 2u) e^-u sum_k (-1)^k ((2k-1)!!)^2 / (k! (8u)^k)
  long double sum = 1.0L;
  long double term = 1.0L;
  for (int k = 1; k < 40; ++k) {
    const long double next = -term * (2.0L * k - 1.0L) * (2.0L * k - 1.0L) / (k * 8.0L * u);
    if (std::fabs(next) > std::fabs(term)) break;
    term = next;
    sum += term;
  }
  return static_cast<double>(std::sqrt(std::numbers::pi_v<long double> / (2.0L * u)) * std::exp(-static_cast<long double>(u)) * sum);
}


/// Everything a naive bound check needs: f(n), |f(n)|^2 and plain prefix
/// sums, all for n <= x.
struct NaiveSequence {
  std::uint64_t x = 0;
  std::vector<std::complex<double>> f;  // index 0 unused
  std::vector<long double> w;
  std::vector<long double> prefix;

  [[nodiscard]] long double S(std::uint64_t t) const { return prefix[std::min<std::uint64_t>(t, x)]; }
  [[nodiscard]] double F(double y) const { return static_cast<double>(S(floor_div(x, y)) / S(x)); }
  [[nodiscard]] double abs(std::uint64_t n) const { return std::abs(f[n]); }
};

inline NaiveSequence naive_sequence(const PrimeValues& fp, std::uint64_t x) {
  NaiveSequence s;
  s.x = x;
  s.f.assign(x + 1, 0.0);
  s.w.assign(x + 1, 0.0L);
  s.prefix.assign(x + 1, 0.0L);
  for (std::uint64_t n = 1; n <= x; ++n) {
    s.f[n] = hecke_value(fp, n);
    s.w[n] = std::norm(s.f[n]);
    s.prefix[n] = s.prefix[n - 1] + s.w[n];
  }
  return s;
}

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t d) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= d; ++p) {
    if (d % p == 0 && is_prime(p)) out.push_back(p);
  }
  return out;
}

inline Sides lemma31_first(const NaiveSequence& s, std::uint64_t p) {
  return {s.abs(p), 2.0 / std::sqrt(s.F(static_cast<double>(p)))};
}

inline Sides lemma31_second(const NaiveSequence& s, std::uint64_t p) {
  return {s.abs(p), 2.0 / std::pow(s.F(static_cast<double>(p * p)), 0.25)};
}

inline Sides prop32_squarefree(const NaiveSequence& s, double y, std::uint64_t d) {
  const std::uint64_t limit = floor_div(s.x, y);
  long double lhs = 0.0L;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (n % d == 0) lhs += s.w[n];
  }
  long double coefficient = static_cast<long double>(count_divisors(d));
  for (const auto p : prime_divisors(d)) coefficient *= 1.0L + s.w[p];
  return {static_cast<double>(lhs), static_cast<double>(coefficient * s.S(limit / d))};
}

inline Sides prop32_square(const NaiveSequence& s, double y, std::uint64_t d) {
  const std::uint64_t limit = floor_div(s.x, y);
  long double lhs = 0.0L;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (n % (d * d) == 0) lhs += s.w[n];
  }
  long double coefficient = static_cast<long double>(count_ordered_triples(d));
  for (const auto p : prime_divisors(d)) coefficient *= 2.0L + s.w[p * p];
  return {static_cast<double>(lhs), static_cast<double>(coefficient * s.S(limit / (d * d)))};
}

/// Class index from the exponent of |f(p)|: 0 when |f(p)| <= 1/2, else
/// ceil(log2 |f(p)|) + 1.
inline unsigned naive_class(double a) {
  if (a <= 0.5) return 0;
  int e = 0;
  const double m = std::frexp(a, &e);  // a = m 2^e, m in [1/2, 1)
  return static_cast<unsigned>(m == 0.5 ? e : e + 1);
}

struct NaivePartition {
  double F = 0.0;
  unsigned J = 0;
  std::vector<std::vector<std::uint64_t>> sets;
};

inline NaivePartition naive_partition(const NaiveSequence& s, double y) {
  NaivePartition out;
  out.F = s.F(y);
  out.J = static_cast<unsigned>(std::floor(std::log(1.0 / out.F) / (4.0 * std::log(2.0)))) + 3;
  out.sets.assign(out.J + 1, {});
  const double root = std::sqrt(y);
  for (std::uint64_t p = 2; static_cast<double>(p) <= root; ++p) {
    if (static_cast<double>(p) < root / 2.0 || !is_prime(p)) continue;
    const unsigned j = naive_class(s.abs(p));
    if (j <= out.J) out.sets[j].push_back(p);
  }
  return out;
}

/// sum over n <= x/y with at most k qualifying primes (p | n for j >= 1,
/// p^2 | n for j = 0), against the counting bound.
inline Sides prop33(const NaiveSequence& s, const NaivePartition& part, double y, unsigned j, std::uint64_t k) {
  const auto& P = part.sets[j];
  const std::uint64_t limit = floor_div(s.x, y);
  long double lhs = 0.0L;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    std::uint64_t hits = 0;
    for (const auto p : P) hits += n % (j == 0 ? p * p : p) == 0;
    if (hits <= k) lhs += s.w[n];
  }
  const double size = static_cast<double>(P.size());
  const double kd = static_cast<double>(k);
  const double factor = j == 0 ? 4.0 * kd / size : 4096.0 * kd * kd / (std::pow(16.0, j) * size * size);
  return {static_cast<double>(lhs), factor * static_cast<double>(s.S(s.x))};
}

}  // namespace oracle

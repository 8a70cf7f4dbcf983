#pragma once

// Materialization of Hecke-multiplicative functions and the mass ratio
//
//   F(y; x) = S(floor(x / y)) / S(x),   S(t) = sum_{n <= t} |f(n)|^2.
//
// f is multiplicative over coprime parts, and at a prime power the Hecke
// relation f(p) f(p^k) = f(p^{k+1}) + f(p^{k-1}) fixes f(p^k) from f(p).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecke/bound_report.hpp"
#include "hecke/number_theory.hpp"
#include "hecke/numeric.hpp"
#include "hecke/parallel.hpp"
#include "hecke/prime_models.hpp"

namespace hecke {

/// f(p^k) from f(p) via f(p^{k+1}) = f(p) f(p^k) - f(p^{k-1}).
inline Scalar prime_power_value(Scalar fp, unsigned k) {
  Scalar prev{1.0};
  if (k == 0) return prev;
  Scalar cur = fp;
  for (unsigned i = 1; i < k; ++i) {
    const Scalar next = fp * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// f(n) by factorizing n; the oracle path for the sieve.
template <PrimeModel M>
Scalar value_by_factorization(const M& model, std::uint64_t n, std::uint64_t ceiling = sieve_ceiling()) {
  Scalar value{1.0};
  for (const auto& [p, e] : factorize(n, ceiling).factors) {
    value *= prime_power_value(Scalar{model.value_at(p)}, e);
  }
  return value;
}

inline Scalar value_by_factorization(const PrimeAssignment& model, std::uint64_t n,
                                     std::uint64_t ceiling = sieve_ceiling()) {
  return model.visit([&](const auto& m) { return value_by_factorization(m, n, ceiling); });
}

/// Largest x materialized as a full value array; larger runs stream.
inline constexpr std::uint64_t kMaterializeLimit = 10'000'000;

struct BuildOptions {
  unsigned threads = default_threads();
  std::uint64_t ceiling = sieve_ceiling();
};

namespace detail {

/// Segmented multiplicative sieve. Segment boundaries depend only on x, so
/// each segment's values are identical regardless of which worker fills it.
template <PrimeModel M>
class MultiplicativeSieve {
 public:
  static constexpr std::uint64_t kSegment = std::uint64_t{1} << 15;

  MultiplicativeSieve(const M& model, std::uint64_t x, std::uint64_t ceiling) : model_(model), x_(x) {
    require_within_ceiling(x, ceiling, "x");
    const std::uint64_t root = isqrt(x);
    for (const std::uint64_t p : base_primes_for(ceiling)) {
      if (p > root) break;
      Entry e{p, static_cast<std::uint32_t>(values_.size())};
      const Scalar fp{model.value_at(p)};
      std::uint64_t pk = 1;
      for (unsigned k = 0; pk <= x; ++k) {
        values_.push_back(prime_power_value(fp, k));
        powers_.push_back(pk);
        if (pk > x / p) break;
        pk *= p;
      }
      entries_.push_back(e);
    }
  }

  [[nodiscard]] std::uint64_t segments() const { return (x_ + kSegment - 1) / kSegment; }
  [[nodiscard]] std::uint64_t segment_begin(std::uint64_t s) const { return 1 + s * kSegment; }
  [[nodiscard]] std::uint64_t segment_end(std::uint64_t s) const { return std::min(x_ + 1, 1 + (s + 1) * kSegment); }

  struct Workspace {
    std::vector<Scalar> values;
    std::vector<std::uint64_t> smooth;
    std::vector<std::uint8_t> exponent;
  };

  /// Fills ws.values with f(n) for n in [segment_begin(s), segment_end(s)).
  void compute(std::uint64_t s, Workspace& ws) const {
    const std::uint64_t lo = segment_begin(s);
    const std::uint64_t hi = segment_end(s);
    const std::size_t len = hi - lo;
    ws.values.assign(len, Scalar{1.0});
    ws.smooth.assign(len, 1);
    ws.exponent.assign(len, 0);
    for (const Entry& e : entries_) {
      const std::uint64_t p = e.prime;
      if (p * p >= hi) break;
      const std::uint64_t pp = p * p;
      // exponents >= 2 first; plain multiples of p default to exponent 1
      for (std::uint64_t m = (lo + pp - 1) / pp * pp; m < hi; m += pp) {
        std::uint64_t t = m / pp;
        std::uint8_t k = 2;
        while (t % p == 0) {
          t /= p;
          ++k;
        }
        ws.exponent[m - lo] = k;
      }
      const Scalar* fpk = values_.data() + e.offset;
      const std::uint64_t* pk = powers_.data() + e.offset;
      for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
        const std::size_t i = m - lo;
        const std::uint8_t k = ws.exponent[i] != 0 ? ws.exponent[i] : std::uint8_t{1};
        ws.exponent[i] = 0;
        ws.values[i] *= fpk[k];
        ws.smooth[i] *= pk[k];
      }
    }
    // whatever is left is 1 or a single prime above sqrt(n)
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t rest = (lo + i) / ws.smooth[i];
      if (rest > 1) ws.values[i] *= Scalar{model_.value_at(rest)};
    }
  }

 private:
  struct Entry {
    std::uint64_t prime;
    std::uint32_t offset;
  };

  const M& model_;
  std::uint64_t x_;
  std::vector<Entry> entries_;
  std::vector<Scalar> values_;
  std::vector<std::uint64_t> powers_;
};

/// Feeds consume(lo, values) with consecutive segments covering 1..x.
template <PrimeModel M, typename Consume>
void sieve_segments(const M& model, std::uint64_t x, const BuildOptions& options, Consume&& consume) {
  if (x == 0) throw std::invalid_argument("x must be positive");
  const MultiplicativeSieve<M> sieve(model, x, options.ceiling);
  const auto segments = static_cast<std::size_t>(sieve.segments());
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(segments)));
  std::vector<typename MultiplicativeSieve<M>::Workspace> slots(threads);
  ordered_batches(
      segments, threads, [&](std::size_t s, unsigned slot) { sieve.compute(s, slots[slot]); },
      [&](std::size_t s, unsigned slot) {
        consume(sieve.segment_begin(s), std::span<const Scalar>(slots[slot].values));
      });
}

template <typename Consume>
void sieve_segments(const PrimeAssignment& model, std::uint64_t x, const BuildOptions& options,
                    Consume&& consume) {
  model.visit([&](const auto& m) { sieve_segments(m, x, options, consume); });
}

}  // namespace detail

/// Values f(1..x) with compensated prefix sums of |f(n)|^2. Immutable.
class HeckeSequence {
 public:
  HeckeSequence(std::string source, std::vector<Scalar> values, std::vector<double> prefix)
      : source_(std::move(source)), values_(std::move(values)), prefix_(std::move(prefix)) {}

  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] std::uint64_t x_max() const { return values_.size(); }

  /// f(n); zero for n < 1 (f vanishes off the naturals).
  [[nodiscard]] Scalar value(std::int64_t n) const {
    if (n < 1) return 0.0;
    if (static_cast<std::uint64_t>(n) > x_max()) {
      throw std::out_of_range("f(" + std::to_string(n) + ") beyond x_max = " + std::to_string(x_max()));
    }
    return values_[static_cast<std::size_t>(n - 1)];
  }

  /// f(num / den), zero unless den divides num.
  [[nodiscard]] Scalar value_of_quotient(std::uint64_t num, std::uint64_t den) const {
    if (den == 0 || num % den != 0) return 0.0;
    return value(static_cast<std::int64_t>(num / den));
  }

  [[nodiscard]] double abs_value(std::int64_t n) const { return std::abs(value(n)); }

  /// S(t) = sum_{n <= t} |f(n)|^2 for 0 <= t <= x_max.
  [[nodiscard]] double prefix_sq(std::uint64_t t) const {
    if (t > x_max()) {
      throw std::out_of_range("S(" + std::to_string(t) + ") beyond x_max = " + std::to_string(x_max()));
    }
    return prefix_[t];
  }

  [[nodiscard]] double total_mass() const { return prefix_.back(); }
  [[nodiscard]] std::span<const Scalar> values() const { return values_; }
  [[nodiscard]] std::span<const double> prefix() const { return prefix_; }

 private:
  std::string source_;
  std::vector<Scalar> values_;
  std::vector<double> prefix_;
};

inline HeckeSequence build_sequence(const PrimeAssignment& model, std::uint64_t x, BuildOptions options = {}) {
  require_within_ceiling(x, options.ceiling, "x");
  if (x > kMaterializeLimit) {
    throw std::length_error("x = " + std::to_string(x) + " is above the materialization limit " +
                            std::to_string(kMaterializeLimit) + "; use stream_mass");
  }
  std::vector<Scalar> values;
  values.reserve(x);
  std::vector<double> prefix;
  prefix.reserve(x + 1);
  prefix.push_back(0.0);
  CompensatedSum running;
  detail::sieve_segments(model, x, options, [&](std::uint64_t, std::span<const Scalar> seg) {
    for (const Scalar& v : seg) {
      values.push_back(v);
      running.add(std::norm(v));
      prefix.push_back(running.value());
    }
  });
  return HeckeSequence(model.source(), std::move(values), std::move(prefix));
}

/// Prefix sums at selected checkpoints from a streaming pass, plus the
/// values inside an optional bounded window.
class StreamingMass {
 public:
  StreamingMass(std::string source, std::uint64_t x, std::vector<std::uint64_t> checkpoints,
                std::vector<double> sums, std::uint64_t window_begin, std::vector<Scalar> window)
      : source_(std::move(source)),
        x_(x),
        checkpoints_(std::move(checkpoints)),
        sums_(std::move(sums)),
        window_begin_(window_begin),
        window_(std::move(window)) {}

  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] std::uint64_t x_max() const { return x_; }
  [[nodiscard]] const std::vector<std::uint64_t>& checkpoints() const { return checkpoints_; }

  /// S(t); t must be 0, x or one of the requested checkpoints.
  [[nodiscard]] double prefix_sq(std::uint64_t t) const {
    if (t == 0) return 0.0;
    const auto it = std::lower_bound(checkpoints_.begin(), checkpoints_.end(), t);
    if (it == checkpoints_.end() || *it != t) {
      throw std::out_of_range("S(" + std::to_string(t) + ") was not recorded as a checkpoint");
    }
    return sums_[static_cast<std::size_t>(it - checkpoints_.begin())];
  }

  [[nodiscard]] double total_mass() const { return sums_.back(); }

  [[nodiscard]] Scalar window_value(std::uint64_t n) const {
    if (n < window_begin_ || n >= window_begin_ + window_.size()) {
      throw std::out_of_range("f(" + std::to_string(n) + ") is outside the retained window");
    }
    return window_[n - window_begin_];
  }

 private:
  std::string source_;
  std::uint64_t x_;
  std::vector<std::uint64_t> checkpoints_;
  std::vector<double> sums_;
  std::uint64_t window_begin_;
  std::vector<Scalar> window_;
};

struct ValueWindow {
  std::uint64_t begin = 0;
  std::uint64_t count = 0;
};

inline constexpr std::uint64_t kMaxWindow = 1'000'000;

/// Streams f(1..x) segment by segment, keeping only S(t) at the requested
/// checkpoints (x is always added) and the values in `window`.
inline StreamingMass stream_mass(const PrimeAssignment& model, std::uint64_t x, std::vector<std::uint64_t> checkpoints,
                                 BuildOptions options = {}, ValueWindow window = {}) {
  require_within_ceiling(x, options.ceiling, "x");
  if (window.count > kMaxWindow) throw std::length_error("value window larger than 10^6 entries");
  checkpoints.erase(std::remove(checkpoints.begin(), checkpoints.end(), std::uint64_t{0}), checkpoints.end());
  checkpoints.push_back(x);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.back() > x) throw std::out_of_range("checkpoint beyond x");

  std::vector<double> sums;
  sums.reserve(checkpoints.size());
  std::vector<Scalar> kept;
  std::size_t next = 0;
  CompensatedSum running;
  detail::sieve_segments(model, x, options, [&](std::uint64_t lo, std::span<const Scalar> seg) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      const std::uint64_t n = lo + i;
      running.add(std::norm(seg[i]));
      if (n >= window.begin && n < window.begin + window.count) kept.push_back(seg[i]);
      while (next < checkpoints.size() && checkpoints[next] == n) {
        sums.push_back(running.value());
        ++next;
      }
    }
  });
  return StreamingMass(model.source(), x, std::move(checkpoints), std::move(sums), window.begin, std::move(kept));
}

template <typename S>
concept PrefixSource = requires(const S& s, std::uint64_t t) {
  { s.x_max() } -> std::convertible_to<std::uint64_t>;
  { s.prefix_sq(t) } -> std::convertible_to<double>;
};

struct MassRatio {
  std::uint64_t x = 0;
  double y = 1.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
};

/// F(y; x) for the sequence's own x. Zero when y > x.
template <PrefixSource S>
MassRatio mass_ratio(const S& seq, double y) {
  if (!(y >= 1.0) || !std::isfinite(y)) throw std::invalid_argument("mass_ratio requires finite y >= 1");
  MassRatio r;
  r.x = seq.x_max();
  r.y = y;
  r.denominator = seq.prefix_sq(r.x);
  if (!(r.denominator > 0.0)) throw std::domain_error("degenerate sequence: S(x) = 0, F cannot be normalized");
  r.numerator = seq.prefix_sq(floor_quotient(r.x, y));
  r.value = std::clamp(r.numerator / r.denominator, 0.0, 1.0);
  return r;
}

/// Checks f(m) f(n) = sum_{d | (m,n)} f(mn / d^2) with relative tolerance
/// 1e-9 on the larger side (absolute floor 1e-12).
inline BoundReport verify_hecke_relation(const HeckeSequence& seq, std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw std::invalid_argument("m and n must be positive");
  if (m > seq.x_max() / n) throw std::out_of_range("mn exceeds x_max");
  const Scalar left = seq.value(static_cast<std::int64_t>(m)) * seq.value(static_cast<std::int64_t>(n));
  Scalar right{0.0};
  const std::uint64_t g = gcd(m, n);
  const std::uint64_t mn = m * n;
  for (std::uint64_t d = 1; d * d <= g; ++d) {
    if (g % d != 0) continue;
    right += seq.value(static_cast<std::int64_t>(mn / (d * d)));
    const std::uint64_t e = g / d;
    if (e != d) right += seq.value(static_cast<std::int64_t>(mn / (e * e)));
  }
  CheckContext ctx;
  ctx.x = seq.x_max();
  ctx.m = m;
  ctx.n = n;
  const double scale = std::max(std::abs(left), std::abs(right));
  return make_report("hecke_relation", std::abs(left - right), kRelTol * scale, ctx);
}

}  // namespace hecke

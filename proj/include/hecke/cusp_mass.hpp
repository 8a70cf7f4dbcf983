#pragma once

// Cusp mass of a Maass-form-shaped Fourier expansion
//
//   phi(x + iy) = sqrt(y) sum_n lambda(n) K_{ir}(2 pi n y) cos(2 pi n x)   (or sin)
//
// over the strip |x| <= 1/2, y >= T. After integrating in x,
//
//   M(T) = sum_n |lambda(n)|^2 int_{nT}^inf K_{ir}(2 pi t)^2 dt / t            (direct)
//        = int_1^inf K_{ir}(2 pi t)^2 S(t / T) dt / t                          (swapped)
//
// with S the prefix sums of |lambda(n)|^2. The normalizing constant C^2 / 2
// cancels in rho(T) = M(T) / M(1) and is never formed.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hecke/bessel.hpp"
#include "hecke/hecke_sequence.hpp"
#include "hecke/numeric.hpp"
#include "hecke/quadrature.hpp"

namespace hecke {

enum class Parity { even, odd };

struct SpectralParams {
  double r = 0.0;
  Parity parity = Parity::even;
};

/// Beyond 2 pi t = 40 every K_{ir}(2 pi t)^2 term is below e^-80 of the
/// leading one.
inline constexpr double kExponentialCutoff = 40.0;
/// Tails below this are reported as effectively zero.
inline constexpr double kNegligibleTail = 1e-30;

struct TailIntegral {
  double value = 0.0;
  double error = 0.0;
  bool negligible = false;
};

/// Evaluates and memoizes K_{ir}(2 pi t)^2 / t integrals for one r. Keeps
/// direct and swapped evaluations on the same Bessel values.
class CuspMassEvaluator {
 public:
  static constexpr double kPanel = 0.25;

  explicit CuspMassEvaluator(double r) : r_(r) {
    if (!(r >= 0.0) || r > kMaxBesselOrder) throw std::domain_error("r must lie in [0, 1e3]");
  }

  [[nodiscard]] double r() const { return r_; }

  /// K_{ir}(2 pi t)^2 / t
  double integrand(double t) {
    const auto key = std::bit_cast<std::uint64_t>(t);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    const double k = kbessel_ir(r_, 2.0 * std::numbers::pi * t);
    const double v = k * k / t;
    cache_.emplace(key, v);
    return v;
  }

  /// int_a^inf K_{ir}(2 pi t)^2 dt / t
  TailIntegral tail(double a) {
    if (!(a >= 1.0)) throw std::invalid_argument("tail integral requires a >= 1");
    auto f = [this](double t) { return integrand(t); };
    const QuadratureResult q = integrate_tail(f, a, kPanel);
    return {q.value, q.error, q.value < kNegligibleTail};
  }

  /// int_a^b K_{ir}(2 pi t)^2 dt / t over unit-aligned panels.
  double segment(double a, double b) {
    if (!(a >= 1.0) || b < a) throw std::invalid_argument("segment integral requires 1 <= a <= b");
    auto f = [this](double t) { return integrand(t); };
    CompensatedSum total;
    for (double lo = a; lo < b; lo += kPanel) {
      const double hi = std::min(b, lo + kPanel);
      const QuadratureResult crude = detail::gauss_kronrod15(f, lo, hi);
      const double tol = 1e-13 * std::fabs(crude.value);
      const double piece = crude.error <= tol ? crude.value : integrate(f, lo, hi, tol).value;
      total.add(piece);
      if (piece == 0.0 && f(hi) == 0.0) break;
      if (std::fabs(piece) <= 1e-18 * std::fabs(total.value())) break;
    }
    return total.value();
  }

 private:
  double r_;
  std::unordered_map<std::uint64_t, double> cache_;
};

inline TailIntegral tail_integral(double r, double a) { return CuspMassEvaluator(r).tail(a); }

/// Smallest N with 2 pi N T beyond the exponential cutoff.
inline std::uint64_t parseval_truncation(double T) {
  return static_cast<std::uint64_t>(std::floor(kExponentialCutoff / (2.0 * std::numbers::pi * T))) + 1;
}

namespace detail {

inline void check_height(double T) {
  if (!(T >= 1.0) || !std::isfinite(T)) throw std::invalid_argument("cusp mass requires finite T >= 1");
}

// Sums term(n) for n = 1..N, doubling N until the added block is below
// 1e-14 of the total.
template <typename Term>
double truncated_series(const HeckeSequence& seq, std::uint64_t N, Term&& term) {
  CompensatedSum total;
  std::uint64_t done = 0;
  for (;;) {
    if (N > seq.x_max()) {
      throw std::out_of_range("cusp mass needs lambda(n) up to n = " + std::to_string(N) + " but x = " +
                              std::to_string(seq.x_max()));
    }
    CompensatedSum block;
    for (std::uint64_t n = done + 1; n <= N; ++n) block.add(term(n));
    const bool first = done == 0;
    total.add(block.value());
    done = N;
    if (!first && std::fabs(block.value()) <= 1e-14 * std::fabs(total.value())) break;
    N = std::min(2 * N, std::max(seq.x_max(), N));
    if (N == done) break;
  }
  return total.value();
}

}  // namespace detail

/// M(T) as sum_n |lambda(n)|^2 * tail(nT).
inline double cusp_mass_direct(const HeckeSequence& seq, CuspMassEvaluator& eval, double T) {
  detail::check_height(T);
  return detail::truncated_series(seq, parseval_truncation(T), [&](std::uint64_t n) {
    const double w = std::norm(seq.value(static_cast<std::int64_t>(n)));
    return w == 0.0 ? 0.0 : w * eval.tail(static_cast<double>(n) * T).value;
  });
}

/// M(T) as int_1^inf K^2 S(t/T) dt/t, taken piecewise where S(t/T) = S(n).
inline double cusp_mass_swapped(const HeckeSequence& seq, CuspMassEvaluator& eval, double T) {
  detail::check_height(T);
  return detail::truncated_series(seq, parseval_truncation(T), [&](std::uint64_t n) {
    const double s = seq.prefix_sq(n);
    const double lo = std::max(1.0, static_cast<double>(n) * T);
    const double hi = static_cast<double>(n + 1) * T;
    return s == 0.0 ? 0.0 : s * eval.segment(lo, hi);
  });
}

inline double cusp_mass_direct(const HeckeSequence& seq, double r, double T) {
  CuspMassEvaluator eval(r);
  return cusp_mass_direct(seq, eval, T);
}

inline double cusp_mass_swapped(const HeckeSequence& seq, double r, double T) {
  CuspMassEvaluator eval(r);
  return cusp_mass_swapped(seq, eval, T);
}

/// sum_n |lambda(n)|^2 K_{ir}(2 pi n y)^2: twice the x-integral of
/// |phi(x+iy)|^2 / y over |x| <= 1/2 by orthogonality.
inline double section_mass_parseval(const HeckeSequence& seq, double r, double y) {
  if (!(y > 0.0)) throw std::invalid_argument("height must be positive");
  const std::uint64_t N = static_cast<std::uint64_t>(std::floor(kExponentialCutoff / (2.0 * std::numbers::pi * y))) + 1;
  CompensatedSum total;
  for (std::uint64_t n = 1; n <= std::min(N, seq.x_max()); ++n) {
    const double k = kbessel_ir(r, 2.0 * std::numbers::pi * static_cast<double>(n) * y);
    total.add(std::norm(seq.value(static_cast<std::int64_t>(n))) * k * k);
  }
  return total.value();
}

/// The same quantity from the x-integral itself: 2 int_{-1/2}^{1/2}
/// |sum_n lambda(n) K_{ir}(2 pi n y) trig(2 pi n x)|^2 dx on an nx-point
/// midpoint grid (exact once nx exceeds twice the highest frequency).
inline double section_mass_fourier(const HeckeSequence& seq, const SpectralParams& params, double y,
                                   std::size_t nx) {
  if (!(y > 0.0) || nx == 0) throw std::invalid_argument("need y > 0 and nx > 0");
  const std::uint64_t N = std::min<std::uint64_t>(
      seq.x_max(), static_cast<std::uint64_t>(std::floor(kExponentialCutoff / (2.0 * std::numbers::pi * y))) + 1);
  std::vector<Scalar> coeff(N + 1);
  for (std::uint64_t n = 1; n <= N; ++n) {
    coeff[n] = seq.value(static_cast<std::int64_t>(n)) *
               kbessel_ir(params.r, 2.0 * std::numbers::pi * static_cast<double>(n) * y);
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = -0.5 + (static_cast<double>(i) + 0.5) / static_cast<double>(nx);
    Scalar phi{0.0};
    for (std::uint64_t n = 1; n <= N; ++n) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(n) * x;
      phi += coeff[n] * (params.parity == Parity::even ? std::cos(angle) : std::sin(angle));
    }
    total.add(std::norm(phi));
  }
  return 2.0 * total.value() / static_cast<double>(nx);
}

struct CuspMassProfile {
  double r = 0.0;
  std::vector<double> T_grid;
  std::vector<double> mass;   // M(T), unnormalized
  std::vector<double> rho;    // M(T) / M(1)
  std::vector<double> bound;  // log(eT) / sqrt(T)
  std::vector<double> ratio;  // rho / bound
  std::uint64_t N_trunc = 0;
  /// max over the grid of |direct - swapped| / direct
  double quadrature_error_estimate = 0.0;
  /// sup_T rho(T) sqrt(T) / log(eT)
  double empirical_constant = 0.0;
};

inline CuspMassProfile cusp_mass_profile(const HeckeSequence& seq, double r, std::vector<double> T_grid) {
  if (T_grid.empty()) throw std::invalid_argument("empty T grid");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    detail::check_height(T_grid[i]);
    if (i > 0 && !(T_grid[i] > T_grid[i - 1])) throw std::invalid_argument("T grid must be strictly ascending");
  }
  CuspMassEvaluator eval(r);
  CuspMassProfile out;
  out.r = r;
  out.N_trunc = parseval_truncation(T_grid.front());
  const double base = cusp_mass_direct(seq, eval, 1.0);
  if (!(base > 0.0)) throw std::domain_error("M(1) = 0: profile cannot be normalized");
  for (const double T : T_grid) {
    const double direct = cusp_mass_direct(seq, eval, T);
    const double swapped = cusp_mass_swapped(seq, eval, T);
    const double rho = std::clamp(direct / base, 0.0, 1.0);
    const double bound = (1.0 + std::log(T)) / std::sqrt(T);
    out.mass.push_back(direct);
    out.rho.push_back(rho);
    out.bound.push_back(bound);
    out.ratio.push_back(rho / bound);
    out.empirical_constant = std::max(out.empirical_constant, rho / bound);
    out.quadrature_error_estimate = std::max(out.quadrature_error_estimate, relative_difference(direct, swapped));
  }
  out.T_grid = std::move(T_grid);
  return out;
}

// ---------------------------------------------------------------------------
// Uniform-measure arithmetic on the standard fundamental domain

/// (3/pi) times the hyperbolic area of {z in F : y <= T}, i.e. 1 - 3/(pi T).
inline double domain_mass_below(double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("domain_mass_below requires T >= 1");
  return 1.0 - 3.0 / (std::numbers::pi * T);
}

/// Limiting mass above height T when a fraction c of the mass stays
/// equidistributed: 1 - c + 3c / (pi T).
inline double cusp_mass_above_limit(double c, double T) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("c must lie in [0, 1]");
  return 1.0 - c * domain_mass_below(T);
}

/// The T >= 1 with domain_mass_below(T) = c, namely 3 / (pi (1 - c)).
inline double height_where_mass_below_equals(double c) {
  if (!(c >= 1.0 - 3.0 / std::numbers::pi) || !(c < 1.0)) {
    throw std::invalid_argument("c must lie in [1 - 3/pi, 1)");
  }
  return 3.0 / (std::numbers::pi * (1.0 - c));
}

}  // namespace hecke

#pragma once

// K-Bessel function of purely imaginary order,
//
//   K_{ir}(u) = int_0^inf exp(-u cosh t) cos(r t) dt,   u > 0,
//
// which is real for real r. The integrand is entire and decays doubly
// exponentially, so the plain trapezoid rule on [0, inf) converges
// geometrically in 1/h. Steps are halved until two successive sums agree to
// rounding level. Sums are carried in long double because for large r the
// result is exponentially smaller (about exp(-pi r / 2)) than the integrand.

#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hecke {

inline constexpr double kMaxBesselOrder = 1e3;

struct BesselEvaluation {
  double value = 0.0;
  /// exp(u) K_{ir}(u), free of underflow.
  double scaled = 0.0;
  double error_estimate = 0.0;
  /// Final trapezoid step.
  double step = 0.0;
  int refinements = 0;
  /// value fell below the normal double range and was flushed to 0.
  bool underflow = false;
};

namespace detail {

inline void check_bessel_args(double r, double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("K_ir(u) requires finite u > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("K_ir(u) requires finite r >= 0");
  if (r > kMaxBesselOrder) throw std::domain_error("K_ir(u): r above the supported cap 1e3");
}

// Past this t, exp(-u (cosh t - 1)) < exp(-60).
inline long double bessel_cutoff(double u) { return std::acosh(1.0L + 60.0L / u); }

inline double unscale(long double scaled, double u, bool& underflow) {
  const long double v = scaled * std::exp(-static_cast<long double>(u));
  const auto out = static_cast<double>(v);
  underflow = v != 0.0L && std::fabs(out) < DBL_MIN;
  return underflow ? 0.0 : out;
}

}  // namespace detail

/// Scaled trapezoid value exp(u) K_{ir}(u) at a fixed step h.
inline long double kbessel_ir_scaled_fixed_step(double r, double u, double h) {
  detail::check_bessel_args(r, u);
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  const long double cutoff = detail::bessel_cutoff(u);
  const long double hl = h;
  // node k*h, computed as multiples to avoid drift
  long double sum = 0.5L;
  for (long k = 1;; ++k) {
    const long double t = hl * static_cast<long double>(k);
    if (t >= cutoff) break;
    sum += std::exp(-static_cast<long double>(u) * (std::cosh(t) - 1.0L)) * std::cos(static_cast<long double>(r) * t);
  }
  return hl * sum;
}

/// K_{ir}(u) from a single trapezoid pass with step h.
inline double kbessel_ir_fixed_step(double r, double u, double h) {
  bool underflow = false;
  return detail::unscale(kbessel_ir_scaled_fixed_step(r, u, h), u, underflow);
}

inline BesselEvaluation kbessel_ir_eval(double r, double u) {
  detail::check_bessel_args(r, u);
  const long double rl = r;
  const long double ul = u;
  const long double cutoff = detail::bessel_cutoff(u);
  long double h = std::fmin(0.5, std::numbers::pi / (2.0 * (r + 1.0)));
  // initial grid: t = 0, h, 2h, ...
  long double sum = 0.5L;
  long double envelope = 0.5L;
  for (long k = 1;; ++k) {
    const long double t = h * static_cast<long double>(k);
    if (t >= cutoff) break;
    const long double env = std::exp(-ul * (std::cosh(t) - 1.0L));
    sum += env * std::cos(rl * t);
    envelope += env;
  }
  long double estimate = h * sum;

  BesselEvaluation out;
  constexpr int kMaxRefinements = 24;
  for (int level = 1; level <= kMaxRefinements; ++level) {
    // midpoints of the current grid
    long double mid_sum = 0.0L;
    long double mid_env = 0.0L;
    for (long k = 0;; ++k) {
      const long double t = h * (static_cast<long double>(k) + 0.5L);
      if (t >= cutoff) break;
      const long double env = std::exp(-ul * (std::cosh(t) - 1.0L));
      mid_sum += env * std::cos(rl * t);
      mid_env += env;
    }
    sum += mid_sum;
    envelope += mid_env;
    h *= 0.5L;
    const long double refined = h * sum;
    const long double diff = std::fabs(refined - estimate);
    estimate = refined;
    out.refinements = level;
    // rounding floor: a few ulps of the absolute integrand mass
    const long double floor_tol = 64.0L * LDBL_EPSILON * h * envelope;
    if (level >= 2 && (diff <= floor_tol || diff <= 1e-16L * std::fabs(refined))) {
      out.error_estimate = static_cast<double>(std::fmax(diff, floor_tol) * std::exp(-ul));
      break;
    }
    out.error_estimate = static_cast<double>(diff * std::exp(-ul));
  }
  out.step = static_cast<double>(h);
  out.scaled = static_cast<double>(estimate);
  out.value = detail::unscale(estimate, u, out.underflow);
  return out;
}

inline double kbessel_ir(double r, double u) { return kbessel_ir_eval(r, u).value; }

}  // namespace hecke

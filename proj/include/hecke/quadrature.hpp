#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hecke {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
QuadratureResult gauss_kronrod15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {kronrod * half, std::fabs((kronrod - gauss) * half), 15};
}

template <typename F>
QuadratureResult adaptive_gk15(F& f, double a, double b, double abs_tol, int depth) {
  QuadratureResult whole = gauss_kronrod15(f, a, b);
  if (whole.error <= abs_tol || depth <= 0) return whole;
  const double mid = 0.5 * (a + b);
  QuadratureResult left = adaptive_gk15(f, a, mid, 0.5 * abs_tol, depth - 1);
  QuadratureResult right = adaptive_gk15(f, mid, b, 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error, whole.evaluations + left.evaluations + right.evaluations};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on [a, b] by recursive bisection.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, int max_depth = 30) {
  return detail::adaptive_gk15(f, a, b, abs_tol, max_depth);
}

/// Integral over [a, inf) of a nonnegative, eventually decaying integrand.
/// Panels of width `panel` are added until one contributes less than
/// `rel_cut` of the running total (or the integrand underflows to zero).
/// Each panel is integrated to relative accuracy `rel_tol` of its own
/// crude estimate.
template <typename F>
QuadratureResult integrate_tail(F&& f, double a, double panel, double rel_tol = 1e-13, double rel_cut = 1e-18,
                                std::size_t max_panels = 100000) {
  QuadratureResult total;
  for (std::size_t i = 0; i < max_panels; ++i) {
    const double lo = a + static_cast<double>(i) * panel;
    const double hi = lo + panel;
    const QuadratureResult crude = detail::gauss_kronrod15(f, lo, hi);
    const double tol = rel_tol * std::fabs(crude.value);
    const QuadratureResult piece = crude.error <= tol ? crude : integrate(f, lo, hi, tol);
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += crude.evaluations + (crude.error <= tol ? 0 : piece.evaluations);
    if (piece.value == 0.0 && f(hi) == 0.0) break;
    if (std::fabs(piece.value) <= rel_cut * std::fabs(total.value)) break;
  }
  return total;
}

}  // namespace hecke

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hecke {

/// Neumaier's variant of Kahan summation. The running compensation keeps
/// the error of long accumulations at O(eps) instead of O(n eps).
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// floor(x / y) for integer x and real y > 0, decided exactly: q*y is
/// split into a rounded product and its fma residual before comparing to x.
inline std::uint64_t floor_quotient(std::uint64_t x, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("floor_quotient requires finite y > 0");
  const auto xd = static_cast<double>(x);
  if (y > xd) return 0;
  const auto le_x = [&](double q) {
    // exact test of q*y <= x
    const double p = q * y;
    if (p < xd) return true;
    if (p > xd) return false;
    return std::fma(q, y, -p) <= 0.0;
  };
  double q = std::floor(xd / y);
  while (q > 0 && !le_x(q)) q -= 1.0;
  while (le_x(q + 1.0)) q += 1.0;
  return static_cast<std::uint64_t>(q);
}

/// Relative tolerance shared by identity checks and bound reports.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

inline bool within_bound(double lhs, double rhs) { return lhs <= rhs * (1.0 + kRelTol) + kAbsTol; }

inline double relative_difference(double a, double b) {
  const double scale = std::fmax(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace hecke

#pragma once

// Prime assignments: the values f(p) that, with f(1) = 1, determine a
// Hecke-multiplicative function through the prime-power recurrence.

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>

#include "hecke/number_theory.hpp"
#include "hecke/philox.hpp"

namespace hecke {

using Scalar = std::complex<double>;

template <typename M>
concept PrimeModel = requires(const M& m, std::uint64_t p) {
  { m.value_at(p) } -> std::convertible_to<Scalar>;
};

/// f(p) = 0 for every prime: supported on perfect squares, f(p^2k) = (-1)^k.
struct ExtremalModel {
  [[nodiscard]] Scalar value_at(std::uint64_t) const { return 0.0; }
  [[nodiscard]] static std::string name() { return "extremal"; }
};

/// f(p) = 2 for every prime, which makes f the divisor function.
struct TauLikeModel {
  [[nodiscard]] Scalar value_at(std::uint64_t) const { return 2.0; }
  [[nodiscard]] static std::string name() { return "tau-like"; }
};

namespace detail {

// Sato-Tate CDF on [0, pi]: G(theta) = (2 theta - sin 2 theta) / (2 pi).
inline double sato_tate_cdf(double theta) {
  return (2.0 * theta - std::sin(2.0 * theta)) / (2.0 * std::numbers::pi);
}

inline double sato_tate_quantile(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return std::numbers::pi;
  double lo = 0.0;
  double hi = std::numbers::pi;
  double theta = std::numbers::pi * u;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = sato_tate_cdf(theta) - u;
    if (g > 0.0) hi = theta; else lo = theta;
    const double density = 2.0 * std::pow(std::sin(theta), 2) / std::numbers::pi;
    double next = density > 0.0 ? theta - g / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - theta) <= 1e-17 * std::numbers::pi || hi - lo <= 4e-16) return next;
    theta = next;
  }
  return theta;
}

}  // namespace detail

/// Independent Sato-Tate draws f(p) = 2 cos(theta_p), theta_p with density
/// (2/pi) sin^2(theta). A Philox counter keyed on (seed, p) gives a 32-bit
/// uniform u which is mapped through a monotone interpolated inverse CDF.
class SatoTateModel {
 public:
  static constexpr int kTableBits = 16;
  static constexpr std::size_t kTableSize = (std::size_t{1} << kTableBits) + 1;

  explicit SatoTateModel(std::uint64_t seed) : seed_(seed) {}

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::string name() const { return "sato-tate:" + std::to_string(seed_); }

  [[nodiscard]] Scalar value_at(std::uint64_t p) const { return real_value_at(p); }

  [[nodiscard]] double real_value_at(std::uint64_t p) const {
    const auto bits = Philox2x64::apply({p, 0}, seed_)[0];
    return quantile_from_bits(static_cast<std::uint32_t>(bits >> 32));
  }

  /// 2 cos(theta(u)) for u = bits / 2^32, linearly interpolated between
  /// table knots spaced 2^-16 apart.
  static double quantile_from_bits(std::uint32_t bits) {
    const auto& table = quantile_table();
    const std::uint32_t idx = bits >> (32 - kTableBits);
    const double frac = static_cast<double>(bits & 0xFFFFu) / 65536.0;
    return table[idx] + frac * (table[idx + 1] - table[idx]);
  }

  static const std::array<double, kTableSize>& quantile_table() {
    static const std::array<double, kTableSize> table = [] {
      std::array<double, kTableSize> t{};
      for (std::size_t i = 0; i < kTableSize; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(kTableSize - 1);
        t[i] = 2.0 * std::cos(detail::sato_tate_quantile(u));
      }
      t.front() = 2.0;
      t.back() = -2.0;
      return t;
    }();
    return table;
  }

 private:
  std::uint64_t seed_;
};

/// Explicit per-prime values with a fallback rule for unlisted primes.
class TableModel {
 public:
  TableModel(std::unordered_map<std::uint64_t, Scalar> values, std::optional<SatoTateModel> fallback,
             std::string label)
      : values_(std::move(values)), fallback_(fallback), label_(std::move(label)) {}

  [[nodiscard]] Scalar value_at(std::uint64_t p) const {
    if (const auto it = values_.find(p); it != values_.end()) return it->second;
    return fallback_ ? fallback_->value_at(p) : Scalar{0.0};
  }

  [[nodiscard]] const std::string& name() const { return label_; }
  [[nodiscard]] std::size_t listed() const { return values_.size(); }

 private:
  std::unordered_map<std::uint64_t, Scalar> values_;
  std::optional<SatoTateModel> fallback_;
  std::string label_;
};

/// Type-erased prime assignment. Deterministic: value_at(p) is a pure
/// function of the model and p.
class PrimeAssignment {
 public:
  using Variant = std::variant<ExtremalModel, TauLikeModel, SatoTateModel, TableModel>;

  template <typename M>
    requires std::constructible_from<Variant, M>
  PrimeAssignment(M model) : model_(std::move(model)) {}  // NOLINT: implicit on purpose

  [[nodiscard]] Scalar value_at(std::uint64_t p) const {
    return std::visit([p](const auto& m) { return Scalar{m.value_at(p)}; }, model_);
  }

  [[nodiscard]] std::string source() const {
    return std::visit([](const auto& m) { return std::string{m.name()}; }, model_);
  }

  [[nodiscard]] const Variant& variant() const { return model_; }

  template <typename Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), model_);
  }

 private:
  Variant model_;
};

inline PrimeAssignment extremal_model() { return ExtremalModel{}; }
inline PrimeAssignment tau_like_model() { return TauLikeModel{}; }
inline PrimeAssignment sato_tate_model(std::uint64_t seed) { return SatoTateModel{seed}; }

/// Parse the text model format:
///
///   # comment
///   default zero | default sato-tate:<seed>
///   <p> <re> [<im>]
///
/// Listed integers must be distinct primes within the sieve ceiling.
inline PrimeAssignment parse_model(std::istream& in, const std::string& label,
                                   std::uint64_t ceiling = sieve_ceiling()) {
  std::unordered_map<std::uint64_t, Scalar> values;
  std::optional<SatoTateModel> fallback;
  bool saw_default = false;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw std::invalid_argument(label + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "default") {
      std::string rule;
      if (!(fields >> rule)) fail("missing default rule");
      if (saw_default) fail("duplicate default rule");
      saw_default = true;
      if (rule == "zero") {
        fallback.reset();
      } else if (rule.rfind("sato-tate:", 0) == 0) {
        const std::string seed_text = rule.substr(10);
        std::size_t used = 0;
        std::uint64_t seed = 0;
        try {
          seed = std::stoull(seed_text, &used);
        } catch (const std::exception&) {
          fail("bad sato-tate seed '" + seed_text + "'");
        }
        if (used != seed_text.size()) fail("bad sato-tate seed '" + seed_text + "'");
        fallback.emplace(seed);
      } else {
        fail("unknown default rule '" + rule + "'");
      }
      continue;
    }
    std::uint64_t p = 0;
    std::size_t used = 0;
    try {
      p = std::stoull(head, &used);
    } catch (const std::exception&) {
      fail("expected a prime, got '" + head + "'");
    }
    if (used != head.size()) fail("expected a prime, got '" + head + "'");
    if (p > ceiling) fail("prime " + head + " exceeds the sieve ceiling");
    if (!is_prime(p)) fail(head + " is not prime");
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> re)) fail("missing value for prime " + head);
    if (!(fields >> im)) {
      im = 0.0;
      fields.clear();
    }
    std::string extra;
    if (fields >> extra) fail("trailing field '" + extra + "'");
    if (!std::isfinite(re) || !std::isfinite(im)) fail("non-finite value");
    if (!values.emplace(p, Scalar{re, im}).second) fail("duplicate prime " + head);
  }
  return TableModel{std::move(values), fallback, label};
}

inline PrimeAssignment load_model_file(const std::string& path, std::uint64_t ceiling = sieve_ceiling()) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file " + path);
  return parse_model(in, "file:" + path, ceiling);
}

enum class ModelKind { extremal, tau_like, sato_tate, file };

struct ModelSpec {
  ModelKind kind = ModelKind::extremal;
  std::uint64_t seed = 0;
  std::string path;
};

inline ModelKind parse_model_kind(const std::string& text) {
  if (text == "extremal") return ModelKind::extremal;
  if (text == "tau-like") return ModelKind::tau_like;
  if (text == "sato-tate") return ModelKind::sato_tate;
  if (text == "file") return ModelKind::file;
  throw std::invalid_argument("unknown model '" + text + "'");
}

inline PrimeAssignment make_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::extremal: return extremal_model();
    case ModelKind::tau_like: return tau_like_model();
    case ModelKind::sato_tate: return sato_tate_model(spec.seed);
    case ModelKind::file: return load_model_file(spec.path);
  }
  throw std::invalid_argument("unknown model kind");
}

}  // namespace hecke

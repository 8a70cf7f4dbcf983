// Mass ratio F(y) for a Sato-Tate sequence against the theorem-shaped
// envelope (1 + log y) / sqrt(y).
//
//   mass_ratio_sample [x] [seed]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "hecke/hecke.hpp"

int main(int argc, char** argv) {
  const std::uint64_t x = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1000000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const auto seq = hecke::build_sequence(hecke::sato_tate_model(seed), x);
  std::printf("S(%llu) = %.6f\n", static_cast<unsigned long long>(x), seq.total_mass());
  std::printf("%12s %14s %14s %10s\n", "y", "F(y)", "envelope", "ratio");
  for (int i = 0; i <= 12; ++i) {
    const double y = std::pow(static_cast<double>(x), i / 12.0);
    const auto c = hecke::check_theorem3(seq, y);
    const double envelope = (1.0 + std::log(y)) / std::sqrt(y);
    std::printf("%12.1f %14.6e %14.6e %10.4f%s\n", y, c.mass_ratio, envelope, c.observed_constant,
                c.report.pass ? "" : "  FAIL");
  }
  return 0;
}

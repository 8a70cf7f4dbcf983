#pragma once

// Philox2x64-10 counter-based generator (Salmon et al., Random123).
// A pure function of (counter, key): the same inputs always give the same
// 128 output bits, independent of call order or thread.

#include <array>
#include <cstdint>

namespace hecke {

class Philox2x64 {
 public:
  using Counter = std::array<std::uint64_t, 2>;

  static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  static constexpr int kRounds = 10;

  static constexpr Counter apply(Counter ctr, std::uint64_t key) {
    for (int round = 0; round < kRounds; ++round) {
      if (round > 0) key += kWeyl;
      const unsigned __int128 product = static_cast<unsigned __int128>(kMultiplier) * ctr[0];
      const auto hi = static_cast<std::uint64_t>(product >> 64);
      const auto lo = static_cast<std::uint64_t>(product);
      ctr = {hi ^ key ^ ctr[1], lo};
    }
    return ctr;
  }
};

}  // namespace hecke

#pragma once

#include <cstdint>

namespace perfectmap {

// splitmix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937_64 +
// distributions because the full byte stream is pinned here: seeded runs
// reproduce across standard libraries and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53 bits of mantissa.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Modulo bias is irrelevant at the bounds
  // used here (tiny vs 2^64); determinism is what matters.
  int next_below(int bound) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound)); }

  bool next_coin(double p) { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace perfectmap

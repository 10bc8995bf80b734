#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace permsel {

/// SplitMix64 generator. Cheap to seed, full 64-bit avalanche per step,
/// and trivially splittable, which is what the per-permutation and
/// per-sample substreams rely on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1].
  double next_unit() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal draw via Box-Muller (one value per call, no cache,
  /// so the draw sequence is a pure function of the stream position).
  double next_gaussian() noexcept {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, bound), exactly unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// Derives the seed of an independent substream from a master seed and a
/// stream index. Parallel and serial evaluation orders see identical
/// streams because stream j depends only on (seed, j).
inline std::uint64_t substream_seed(std::uint64_t seed,
                                    std::uint64_t index) noexcept {
  SplitMix64 g(seed);
  SplitMix64 h(g.next() ^ (index + 0x9E3779B97F4A7C15ULL));
  return h.next();
}

}  // namespace permsel

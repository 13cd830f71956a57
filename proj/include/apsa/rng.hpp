#pragma once

#include <cmath>
#include <cstdint>

namespace apsa {

/// Counter-based deterministic generator (SplitMix64, Vigna 2015).
///
/// Output k for seed s is mix(s + (k+1)*2^64/phi), so the stream is a pure
/// function of (seed, counter) and reproducible across platforms. Gaussian
/// draws use Box-Muller on consecutive outputs; each pair of normals consumes
/// exactly two 64-bit outputs and is returned cosine-first.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal, Box-Muller. Pairs are cached; draw order is fixed.
  double next_gaussian() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Seed for substream `stream` of a base seed: output #stream of the base
/// generator. Used to split one configured seed into independent streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::uint64_t stream) noexcept {
  SplitMix64 g(base);
  std::uint64_t s = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) s = g.next_u64();
  return s;
}

}  // namespace apsa

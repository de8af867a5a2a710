#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace icindex {

/// SplitMix64 (Steele, Lea & Flood 2014). Chosen over the standard engines
/// because its output, and every derived draw below, is identical on every
/// platform and standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// The SplitMix64 output finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Seed of the `index`-th independent substream of `master`:
  /// mix(master + (index + 1) * golden_gamma). Used wherever work is split
  /// across repetitions so results do not depend on scheduling.
  static constexpr std::uint64_t substream(std::uint64_t master, std::uint64_t index) noexcept {
    return mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
  }

 private:
  std::uint64_t state_;
};

}  // namespace icindex

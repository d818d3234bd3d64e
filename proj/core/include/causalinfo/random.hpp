#pragma once

#include <cstdint>

#include "causalinfo/rational.hpp"

namespace causalinfo {

/// SplitMix64 (Steele, Lea, Flood 2014): the state advances by the golden
/// gamma 0x9E3779B97F4A7C15 and each output is the state passed through the
/// fixed 64-bit finalizer. Fixed here so seeds are portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) noexcept { return lo + below(hi - lo + 1); }

  /// True with probability p (p in [0, 1], denominator must fit 64 bits).
  bool bernoulli(const Rational& p) noexcept;

 private:
  std::uint64_t state_;
};

/// Seed of the `stream`-th independent sub-generator of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace causalinfo

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace symncd {

/// SplitMix64 (Steele, Lea & Flood 2014). Every draw used for splitting and
/// sampling goes through this generator and the helpers below, never through
/// std:: distributions, so index lists are identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Independent child stream; advances this generator by one step.
  SplitMix64 split() noexcept;

  /// Uniform integer in [0, bound). bound must be > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// In-place Fisher-Yates shuffle.
void shuffle(std::span<std::size_t> items, SplitMix64& rng) noexcept;

/// `count` distinct elements of `pool` drawn without replacement, in draw
/// order (partial Fisher-Yates over a copy). count is clamped to pool size.
std::vector<std::size_t> sample_without_replacement(std::span<const std::size_t> pool,
                                                    std::size_t count, SplitMix64& rng);

}  // namespace symncd

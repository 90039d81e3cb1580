#pragma once

#include <cstddef>
#include <cstdint>

#include "symncd/dataset.hpp"
#include "symncd/rng.hpp"

namespace symncd {

/// Parameters for a labelled multi-channel corpus with smooth seasonal class
/// profiles plus i.i.d. Gaussian noise. Used by the demo tool and the test suites.
struct SyntheticSpec {
  std::size_t classes = 3;
  std::size_t per_class = 200;
  std::size_t timesteps = 24;
  std::size_t channels = 6;
  double noise_sd = 0.02;
  std::uint64_t seed = 1;
};

/// Noise-free class profile value at (time, channel).
double synthetic_mean(const SyntheticSpec& spec, std::size_t cls, std::size_t time, std::size_t channel);

/// Pixels are emitted class by class; labels are 0..classes-1.
Dataset make_synthetic(const SyntheticSpec& spec);

/// Standard normal draw (Box-Muller) from a SplitMix64 stream, so corpora are
/// identical on every platform.
double standard_normal(SplitMix64& rng);

}  // namespace symncd

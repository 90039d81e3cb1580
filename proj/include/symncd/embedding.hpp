#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symncd/symbolic.hpp"

namespace symncd {

/// c channel series (length t each) followed by t time slices (length c
/// each). Component k is compared only with component k of another embedding.
struct SymbolicEmbedding {
  std::size_t timesteps = 0;
  std::size_t channels = 0;
  std::vector<std::string> components;
  Label label = 0;

  std::size_t size() const noexcept { return components.size(); }
  bool same_shape(const SymbolicEmbedding& other) const noexcept {
    return timesteps == other.timesteps && channels == other.channels;
  }
};

SymbolicEmbedding cross_transform(const SymbolicPixel& pixel);

/// All components concatenated in order with no separator (length 2*t*c).
std::string flatten(const SymbolicEmbedding& embedding);

}  // namespace symncd

#include "symncd/embedding.hpp"

namespace symncd {

SymbolicEmbedding cross_transform(const SymbolicPixel& pixel) {
  const std::size_t t = pixel.timesteps;
  const std::size_t c = pixel.channels;
  SymbolicEmbedding out;
  out.timesteps = t;
  out.channels = c;
  out.label = pixel.label;
  out.components.reserve(c + t);
  for (std::size_t ch = 0; ch < c; ++ch) {
    std::string series(t, '\0');
    for (std::size_t time = 0; time < t; ++time) series[time] = pixel.at(time, ch);
    out.components.push_back(std::move(series));
  }
  for (std::size_t time = 0; time < t; ++time) out.components.emplace_back(pixel.grid.substr(time * c, c));
  return out;
}

std::string flatten(const SymbolicEmbedding& embedding) {
  std::string out;
  out.reserve(2 * embedding.timesteps * embedding.channels);
  for (const auto& component : embedding.components) out += component;
  return out;
}

}  // namespace symncd

#include "symncd/symbolic.hpp"

#include <algorithm>
#include <cmath>

#include "symncd/error.hpp"
#include "symncd/log.hpp"

namespace symncd {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < kMinSize || size > kMaxSize) {
    throw ArgumentError("alphabet length must be in [2, 52], got " + std::to_string(size));
  }
}

Breakpoints build_breakpoints(double min, double max, std::size_t intervals) {
  if (intervals < Alphabet::kMinSize || intervals > Alphabet::kMaxSize) {
    throw ArgumentError("alphabet length must be in [2, 52], got " + std::to_string(intervals));
  }
  if (!std::isfinite(min) || !std::isfinite(max)) throw ArgumentError("breakpoint extrema must be finite");
  if (min > max) throw ArgumentError("breakpoints: min > max");
  if (min == max) {
    logger()->warn("degenerate extrema (min == max == {}); every value maps to one symbol", min);
  }

  Breakpoints bp;
  bp.betas_.resize(intervals + 1);
  const double width = (max - min) / static_cast<double>(intervals);
  for (std::size_t i = 0; i < intervals; ++i) bp.betas_[i] = min + static_cast<double>(i) * width;
  bp.betas_[intervals] = max;
  return bp;
}

std::size_t quantize_index(double x, const Breakpoints& breakpoints, std::size_t* clamped) {
  const std::size_t last = breakpoints.intervals() - 1;
  if (breakpoints.degenerate()) {
    if (x != breakpoints.min()) {
      if (clamped) ++*clamped;
      else logger()->warn("value {} outside degenerate range {}", x, breakpoints.min());
    }
    return 0;
  }
  if (x < breakpoints.min() || x > breakpoints.max()) {
    if (clamped) ++*clamped;
    else logger()->warn("value {} outside [{}, {}]; clamped to end symbol", x, breakpoints.min(), breakpoints.max());
    return x < breakpoints.min() ? 0 : last;
  }
  const auto betas = breakpoints.betas();
  // Last beta <= x; x == max lands past the final interval and is clamped.
  const auto above = std::upper_bound(betas.begin(), betas.end(), x);
  const auto k = static_cast<std::size_t>(above - betas.begin()) - 1;
  return std::min(k, last);
}

char quantize_value(double x, const Breakpoints& breakpoints, const Alphabet& alphabet, std::size_t* clamped) {
  if (alphabet.size() != breakpoints.intervals()) {
    throw ArgumentError("alphabet size does not match breakpoint interval count");
  }
  return alphabet.symbol(quantize_index(x, breakpoints, clamped));
}

SymbolicPixel symbolize_pixel(const Pixel& pixel, const Breakpoints& breakpoints, const Alphabet& alphabet,
                              std::size_t* clamped) {
  if (alphabet.size() != breakpoints.intervals()) {
    throw ArgumentError("alphabet size does not match breakpoint interval count");
  }
  SymbolicPixel out;
  out.timesteps = pixel.timesteps();
  out.channels = pixel.channels();
  out.label = pixel.label();
  out.grid.reserve(pixel.values().size());
  std::size_t local = 0;
  for (double v : pixel.values()) out.grid.push_back(alphabet.symbol(quantize_index(v, breakpoints, &local)));
  if (clamped) {
    *clamped += local;
  } else if (local > 0) {
    logger()->warn("{} value(s) of a class-{} pixel fell outside [{}, {}] and were clamped", local, pixel.label(),
                   breakpoints.min(), breakpoints.max());
  }
  return out;
}

}  // namespace symncd

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symncd/dataset.hpp"

namespace symncd {

/// The first `size` symbols of the fixed order a..z A..Z.
class Alphabet {
 public:
  static constexpr std::string_view kOrder = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  static constexpr std::size_t kMinSize = 2;
  static constexpr std::size_t kMaxSize = kOrder.size();

  explicit Alphabet(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  /// 0-based: symbol(0) == 'a', symbol(26) == 'A'.
  char symbol(std::size_t index) const noexcept { return kOrder[index]; }
  std::string_view symbols() const noexcept { return kOrder.substr(0, size_); }
  bool contains(char symbol) const noexcept { return symbols().find(symbol) != std::string_view::npos; }

 private:
  std::size_t size_;
};

/// l + 1 equally spaced thresholds from min to max.
class Breakpoints {
 public:
  std::size_t intervals() const noexcept { return betas_.size() - 1; }
  std::span<const double> betas() const noexcept { return betas_; }
  double min() const noexcept { return betas_.front(); }
  double max() const noexcept { return betas_.back(); }
  bool degenerate() const noexcept { return betas_.front() == betas_.back(); }

 private:
  friend Breakpoints build_breakpoints(double min, double max, std::size_t intervals);
  std::vector<double> betas_;
};

/// betas[i] = min + i * (max - min) / l for i = 0..l. Throws ArgumentError
/// when l is outside [2, 52] or min > max; warns when min == max.
Breakpoints build_breakpoints(double min, double max, std::size_t intervals);
inline Breakpoints build_breakpoints(const Extrema& extrema, std::size_t intervals) {
  return build_breakpoints(extrema.min, extrema.max, intervals);
}

/// 0-based interval index k with betas[k] <= x < betas[k+1]. x == max maps to
/// l - 1. Values outside [min, max] clamp to the end intervals; `clamped`
/// counts them when non-null, otherwise each clamp logs a warning. With
/// degenerate breakpoints every value maps to 0.
std::size_t quantize_index(double x, const Breakpoints& breakpoints, std::size_t* clamped = nullptr);

char quantize_value(double x, const Breakpoints& breakpoints, const Alphabet& alphabet,
                    std::size_t* clamped = nullptr);

/// t x c grid of symbols, row-major, one octet per symbol.
struct SymbolicPixel {
  std::size_t timesteps = 0;
  std::size_t channels = 0;
  std::string grid;
  Label label = 0;

  char at(std::size_t time, std::size_t channel) const noexcept { return grid[time * channels + channel]; }
};

/// Elementwise quantization. Clamped values are added to `clamped` when
/// non-null; otherwise one warning is logged per pixel that needed clamping.
SymbolicPixel symbolize_pixel(const Pixel& pixel, const Breakpoints& breakpoints, const Alphabet& alphabet,
                              std::size_t* clamped = nullptr);

}  // namespace symncd

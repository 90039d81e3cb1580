#include "symncd/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "symncd/error.hpp"
#include "symncd/rng.hpp"

namespace symncd {

double standard_normal(SplitMix64& rng) {
  // 53-bit uniforms in (0, 1]; u1 never hits 0 so log is finite.
  const double u1 = (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double synthetic_mean(const SyntheticSpec& spec, std::size_t cls, std::size_t time, std::size_t channel) {
  const double t = static_cast<double>(time) / static_cast<double>(std::max<std::size_t>(1, spec.timesteps - 1));
  const double k = static_cast<double>(cls);
  const double ch = static_cast<double>(channel);
  // Each class has its own green-up date and peak height; channels respond
  // with different baselines and signed gains, like visible vs NIR bands.
  const double peak_at = 0.3 + 0.4 * k / static_cast<double>(std::max<std::size_t>(1, spec.classes - 1));
  const double height = 0.25 + 0.1 * std::fmod(k * 1.7, 1.0);
  const double season = height * std::exp(-std::pow((t - peak_at) / 0.18, 2.0));
  const double base = 0.2 + 0.5 * std::fmod(ch * 0.37, 1.0);
  const double gain = (channel % 3 == 1) ? -0.6 : 1.0 - 0.1 * ch;
  return base + gain * season;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 1 || spec.per_class < 1 || spec.timesteps < 1 || spec.channels < 1) {
    throw ArgumentError("synthetic corpus needs classes, per_class, t and c >= 1");
  }
  if (!(spec.noise_sd >= 0.0)) throw ArgumentError("noise_sd must be >= 0");
  Dataset d;
  d.timesteps = spec.timesteps;
  d.channels = spec.channels;
  SplitMix64 rng(spec.seed);
  for (std::size_t cls = 0; cls < spec.classes; ++cls) {
    d.class_names[static_cast<Label>(cls)] = "class_" + std::to_string(cls);
    for (std::size_t n = 0; n < spec.per_class; ++n) {
      std::vector<double> values(spec.timesteps * spec.channels);
      for (std::size_t i = 0; i < spec.timesteps; ++i) {
        for (std::size_t j = 0; j < spec.channels; ++j) {
          values[i * spec.channels + j] = synthetic_mean(spec, cls, i, j) + spec.noise_sd * standard_normal(rng);
        }
      }
      d.pixels.emplace_back(spec.timesteps, spec.channels, std::move(values), static_cast<Label>(cls));
    }
  }
  return d;
}

}  // namespace symncd

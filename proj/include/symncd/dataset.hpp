#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symncd {

using Label = std::int64_t;
using IndexList = std::vector<std::size_t>;

/// One sample: a t x c grid of reflectivities (row = timestep, column =
/// channel) stored row-major, plus its class label.
class Pixel {
 public:
  Pixel(std::size_t timesteps, std::size_t channels, std::vector<double> values, Label label);

  std::size_t timesteps() const noexcept { return timesteps_; }
  std::size_t channels() const noexcept { return channels_; }
  Label label() const noexcept { return label_; }

  double at(std::size_t time, std::size_t channel) const noexcept {
    return values_[time * channels_ + channel];
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t timesteps_;
  std::size_t channels_;
  std::vector<double> values_;
  Label label_;
};

struct Dataset {
  std::size_t timesteps = 0;
  std::size_t channels = 0;
  std::vector<Pixel> pixels;
  std::map<Label, std::string> class_names;

  std::size_t size() const noexcept { return pixels.size(); }
  bool empty() const noexcept { return pixels.empty(); }

  /// Class id -> indices of its pixels, in dataset order.
  std::map<Label, IndexList> indices_by_class() const;
  std::map<Label, IndexList> indices_by_class(std::span<const std::size_t> subset) const;
  std::vector<Label> labels(std::span<const std::size_t> subset) const;
};

/// Contents of the optional JSON manifest: {"t": int, "c": int, "classes": {"<id>": "<name>"}}.
struct Manifest {
  std::size_t timesteps = 0;
  std::size_t channels = 0;
  std::map<Label, std::string> class_names;
};

struct LoadOptions {
  /// Classes with fewer samples are dropped with a warning. 0 disables the filter.
  std::size_t min_class_size = 5;
};

Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view json_text);

/// Reads a PTS-CSV file. Dimensions come from the manifest when given,
/// otherwise from a leading `# t=<int> c=<int>` line.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::filesystem::path>& manifest_path = std::nullopt,
                     const LoadOptions& options = {});
Dataset parse_dataset(std::istream& in, const std::optional<Manifest>& manifest = std::nullopt,
                      const LoadOptions& options = {});

/// Writes PTS-CSV with the `# t= c=` line so the file loads without a manifest.
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
};

Extrema global_extrema(const Dataset& dataset);
/// Extrema over the listed pixels only (the `--extrema train` policy).
Extrema global_extrema(const Dataset& dataset, std::span<const std::size_t> subset);

struct Split {
  IndexList train;  // ascending
  IndexList test;   // ascending
  std::uint64_t seed = 0;
};

/// Per class, ceil(fraction * count) pixels (at least 1, at most count - 1
/// when count >= 2) go to train; the rest to test.
Split split_stratified(const Dataset& dataset, double train_fraction, std::uint64_t seed);

/// min(n, available) indices per class present in `train_pool`, drawn
/// without replacement. Result is ascending.
IndexList sample_few_shot(const Dataset& dataset, std::span<const std::size_t> train_pool,
                          std::size_t shots, std::uint64_t seed);

/// Stratified sample of `fraction` of all pixels, then split 50/50 per class
/// (train takes the extra pixel on odd counts).
Split subsample_protocol(const Dataset& dataset, double fraction, std::uint64_t seed);

}  // namespace symncd

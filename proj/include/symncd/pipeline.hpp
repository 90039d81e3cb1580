#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "symncd/compressors.hpp"
#include "symncd/dataset.hpp"
#include "symncd/distance.hpp"
#include "symncd/error.hpp"
#include "symncd/metrics.hpp"

namespace symncd {

enum class ExtremaPolicy { all, train };

std::string_view extrema_name(ExtremaPolicy policy) noexcept;
ExtremaPolicy parse_extrema(std::string_view name);

/// Everything a run depends on. Defaults: l = 22, k = 2, gzip, multiscale, seed 32.
struct RunConfig {
  std::filesystem::path data;
  std::optional<std::filesystem::path> manifest;
  double train_fraction = 0.2;
  std::size_t alphabet_len = 22;
  Backend backend = Backend::gzip;
  std::optional<int> level;
  DistanceMode mode = DistanceMode::multiscale;
  std::size_t k = 2;
  std::uint64_t seed = 32;
  std::size_t workers = 0;
  ExtremaPolicy extrema = ExtremaPolicy::all;
  std::size_t min_class_size = 5;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> save_distances;
  /// Above this many |test| x |train| cells rows stream to the classifier
  /// instead of materializing the full matrix.
  std::size_t stream_threshold = std::size_t{1} << 26;

  CompressorConfig compressor() const { return CompressorConfig::make(backend, level); }
};

inline const std::vector<std::uint64_t> kTrialSeeds = {2024, 21, 32, 400, 47};
inline const std::vector<std::size_t> kFewShotSizes = {50, 20, 10, 5};
inline constexpr double kSubsampleFraction = 0.2;

/// Alphabet lengths 2, 7, ..., 52.
std::vector<std::size_t> default_alphabet_sweep();

/// Error carrying the pipeline stage it came from; what() is "<stage>: <cause>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause) : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Resolved configuration echoed into every report (no wall-clock values).
nlohmann::ordered_json config_json(const RunConfig& config);

/// Symbolize, embed, build distances, classify and score one train/test
/// split. Extrema come from `dataset` (policy all) or from the train pixels
/// (policy train). `cache` may be shared across calls.
EvaluationReport evaluate_split(const Dataset& dataset, std::span<const std::size_t> train,
                                std::span<const std::size_t> test, const RunConfig& config,
                                LengthCache* cache = nullptr);

Dataset load_for_run(const RunConfig& config);

/// Stratified split at config.train_fraction / config.seed, then evaluate.
EvaluationReport run_evaluate(const Dataset& dataset, const RunConfig& config, LengthCache* cache = nullptr);

struct TrialResult {
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double oa = 0.0;
  double aa = 0.0;
  double miou = 0.0;
};

struct ShotResult {
  std::size_t shots = 0;
  std::vector<TrialResult> trials;
  TrialAggregate oa, aa, miou;
};

/// For each n: draw n-shot subsets of the main split's train side (one per
/// seed), evaluate on the main split's test side, and aggregate.
std::vector<ShotResult> run_fewshot(const Dataset& dataset, const RunConfig& config, std::span<const std::size_t> shots,
                                    std::span<const std::uint64_t> seeds);

struct SweepRow {
  std::size_t alphabet_len = 0;
  CompressorConfig compressor;
  std::vector<TrialResult> trials;
  double mean_oa = 0.0;
  double mean_aa = 0.0;
  double mean_miou = 0.0;
};

/// Subsample protocol (fraction of the data, halved into train/test) per
/// seed, once per alphabet length.
std::vector<SweepRow> run_sweep_alphabet(const Dataset& dataset, const RunConfig& config,
                                         std::span<const std::size_t> lengths, std::span<const std::uint64_t> seeds,
                                         double fraction = kSubsampleFraction);

/// Same protocol, once per backend at that backend's default level (or
/// config.level when only one backend is swept).
std::vector<SweepRow> run_sweep_compressor(const Dataset& dataset, const RunConfig& config,
                                           std::span<const Backend> backends, std::span<const std::uint64_t> seeds,
                                           double fraction = kSubsampleFraction);

nlohmann::ordered_json fewshot_json(const RunConfig& config, const std::vector<ShotResult>& results);
nlohmann::ordered_json sweep_json(const char* command, const RunConfig& config, const std::vector<SweepRow>& rows,
                                  std::span<const std::uint64_t> seeds, double fraction);
/// One header line plus one line per row. `key` selects the leading column:
/// "alphabet_len" or "backend".
std::string sweep_csv(const std::vector<SweepRow>& rows, std::string_view key);

}  // namespace symncd

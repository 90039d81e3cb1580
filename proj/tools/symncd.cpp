// symncd: compression-distance classification of multi-channel pixel time series.
//
//   symncd evaluate         --data pixels.csv [--manifest m.json] [--out report.json]
//   symncd fewshot          --data pixels.csv [--shots 50,20,10,5] [--seeds 2024,21,32,400,47]
//   symncd sweep-alphabet   --data pixels.csv [--lengths 2,7,...,52]
//   symncd sweep-compressor --data pixels.csv [--backends gzip,bz2,zstd]

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "symncd/log.hpp"
#include "symncd/pipeline.hpp"

namespace {

using symncd::RunConfig;

struct SharedFlags {
  std::string compressor = "gzip";
  std::string distance = "multiscale";
  std::string extrema = "all";
  int level = -1;
};

void add_shared(CLI::App& cmd, RunConfig& config, SharedFlags& flags) {
  cmd.add_option("--data", config.data, "PTS-CSV dataset")->required()->check(CLI::ExistingFile);
  cmd.add_option("--manifest", config.manifest, "JSON manifest with t, c and class names")->check(CLI::ExistingFile);
  cmd.add_option("--alphabet-len", config.alphabet_len, "alphabet length l")->capture_default_str()->check(CLI::Range(2, 52));
  cmd.add_option("-k", config.k, "neighbors for the kNN vote")->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--compressor", flags.compressor, "compression backend")
      ->capture_default_str()
      ->check(CLI::IsMember({"gzip", "bz2", "zstd"}));
  cmd.add_option("--level", flags.level, "compression level (default: backend default)");
  cmd.add_option("--distance", flags.distance, "distance mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"multiscale", "whole"}));
  cmd.add_option("--seed", config.seed, "split seed")->capture_default_str();
  cmd.add_option("--train-fraction", config.train_fraction, "per-class train fraction, in (0, 1)")->capture_default_str();
  cmd.add_option("--extrema", flags.extrema, "breakpoint extrema source")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "train"}));
  cmd.add_option("--workers", config.workers, "worker threads (0 = all cores)")->capture_default_str();
  cmd.add_option("--min-class-size", config.min_class_size, "drop classes with fewer samples (0 disables)")
      ->capture_default_str();
  cmd.add_option("--out", config.out, "write the JSON report here instead of stdout");
  cmd.add_option("--save-distances", config.save_distances, "write the distance matrix (binary)");
}

void resolve(RunConfig& config, const SharedFlags& flags) {
  config.backend = symncd::parse_backend(flags.compressor);
  config.mode = symncd::parse_mode(flags.distance);
  config.extrema = symncd::parse_extrema(flags.extrema);
  if (flags.level >= 0) config.level = flags.level;
  config.compressor();  // validates the level
}

void emit(const RunConfig& config, const nlohmann::ordered_json& report) {
  const std::string text = report.dump(2) + "\n";
  if (config.out) {
    std::ofstream out(*config.out);
    if (!out) throw symncd::StageError("output", "cannot write " + config.out->string());
    out << text;
  } else {
    std::cout << text;
  }
}

void emit_csv(const RunConfig& config, const std::optional<std::filesystem::path>& csv_path, const std::string& csv) {
  std::optional<std::filesystem::path> path = csv_path;
  if (!path && config.out) path = std::filesystem::path(config.out->string() + ".csv");
  if (!path) return;
  std::ofstream out(*path);
  if (!out) throw symncd::StageError("output", "cannot write " + path->string());
  out << csv;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compression-distance classification of multi-channel pixel time series"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  SharedFlags flags;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress warnings");

  auto* evaluate = app.add_subcommand("evaluate", "stratified split, classify, report OA/AA/mIoU");
  add_shared(*evaluate, config, flags);

  std::vector<std::size_t> shots = symncd::kFewShotSizes;
  std::vector<std::uint64_t> seeds = symncd::kTrialSeeds;
  auto* fewshot = app.add_subcommand("fewshot", "n-shot trials with 95% confidence intervals");
  add_shared(*fewshot, config, flags);
  fewshot->add_option("--shots", shots, "shots per class")->delimiter(',')->capture_default_str();
  fewshot->add_option("--seeds", seeds, "trial seeds (>= 2)")->delimiter(',')->capture_default_str();

  std::vector<std::size_t> lengths = symncd::default_alphabet_sweep();
  double fraction = symncd::kSubsampleFraction;
  std::optional<std::filesystem::path> csv_path;
  auto* sweep_alphabet = app.add_subcommand("sweep-alphabet", "mIoU versus alphabet length (subsample protocol)");
  add_shared(*sweep_alphabet, config, flags);
  sweep_alphabet->add_option("--lengths", lengths, "alphabet lengths")->delimiter(',')->capture_default_str();

  std::vector<std::string> backends = {"gzip", "bz2", "zstd"};
  auto* sweep_compressor = app.add_subcommand("sweep-compressor", "mIoU per compression backend (subsample protocol)");
  add_shared(*sweep_compressor, config, flags);
  sweep_compressor->add_option("--backends", backends, "backends to compare")->delimiter(',')->capture_default_str();

  for (auto* sweep : {sweep_alphabet, sweep_compressor}) {
    sweep->add_option("--seeds", seeds, "trial seeds")->delimiter(',')->capture_default_str();
    sweep->add_option("--subsample-fraction", fraction, "fraction of the data sampled per trial")->capture_default_str();
    sweep->add_option("--csv", csv_path, "CSV table path (default: <out>.csv)");
  }

  CLI11_PARSE(app, argc, argv);
  if (quiet) symncd::logger()->set_level(spdlog::level::err);

  const auto start = std::chrono::steady_clock::now();
  try {
    resolve(config, flags);
    const auto dataset = symncd::load_for_run(config);

    if (evaluate->parsed()) {
      auto report = symncd::run_evaluate(dataset, config);
      report.runtime_seconds = elapsed(start);
      emit(config, symncd::to_json(report));
    } else if (fewshot->parsed()) {
      const auto results = symncd::run_fewshot(dataset, config, shots, seeds);
      auto report = symncd::fewshot_json(config, results);
      report["runtime_seconds"] = elapsed(start);
      emit(config, report);
    } else if (sweep_alphabet->parsed()) {
      const auto rows = symncd::run_sweep_alphabet(dataset, config, lengths, seeds, fraction);
      auto report = symncd::sweep_json("sweep-alphabet", config, rows, seeds, fraction);
      report["runtime_seconds"] = elapsed(start);
      emit(config, report);
      emit_csv(config, csv_path, symncd::sweep_csv(rows, "alphabet_len"));
    } else if (sweep_compressor->parsed()) {
      std::vector<symncd::Backend> ids;
      for (const auto& b : backends) ids.push_back(symncd::parse_backend(b));
      const auto rows = symncd::run_sweep_compressor(dataset, config, ids, seeds, fraction);
      auto report = symncd::sweep_json("sweep-compressor", config, rows, seeds, fraction);
      report["runtime_seconds"] = elapsed(start);
      emit(config, report);
      emit_csv(config, csv_path, symncd::sweep_csv(rows, "backend"));
    }
  } catch (const symncd::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "support/log_capture.hpp"
#include "symncd/pipeline.hpp"
#include "symncd/synthetic.hpp"

using namespace symncd;

namespace {

Dataset small_corpus(std::size_t per_class = 40, std::uint64_t seed = 3) {
  SyntheticSpec spec;
  spec.per_class = per_class;
  spec.seed = seed;
  return make_synthetic(spec);
}

RunConfig small_config() {
  RunConfig config;
  config.train_fraction = 0.5;
  config.workers = 2;
  return config;
}

}  // namespace

TEST(Pipeline, EvaluateSeparatesSyntheticClasses) {
  const auto d = small_corpus();
  const auto report = run_evaluate(d, small_config());
  EXPECT_GE(report.oa, 90.0);
  EXPECT_EQ(report.confusion.total(), 60u);
  EXPECT_EQ(report.config["train_size"], 60);
  EXPECT_EQ(report.config["compressor"], "gzip");
  EXPECT_EQ(report.config["level"], 9);
  EXPECT_GE(report.runtime_seconds, 0.0);
}

TEST(Pipeline, WholeModeAndTrainExtremaRun) {
  const auto d = small_corpus();
  auto config = small_config();
  config.mode = DistanceMode::whole;
  config.extrema = ExtremaPolicy::train;
  const auto report = run_evaluate(d, config);
  EXPECT_GT(report.oa, 100.0 / 3.0);
  EXPECT_EQ(report.config["distance"], "whole");
  EXPECT_EQ(report.config["extrema"], "train");
}

TEST(Pipeline, StreamingPathMatchesDensePath) {
  const auto d = small_corpus(20);
  auto config = small_config();
  const auto dense = run_evaluate(d, config);
  config.stream_threshold = 1;
  const auto streamed = run_evaluate(d, config);
  EXPECT_EQ(dense.confusion.to_rows(), streamed.confusion.to_rows());
}

TEST(Pipeline, ReportJsonIsReproducible) {
  const auto d = small_corpus(20);
  auto a = to_json(run_evaluate(d, small_config()));
  auto b = to_json(run_evaluate(d, small_config()));
  a.erase("runtime_seconds");
  b.erase("runtime_seconds");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Pipeline, StageNamedInErrors) {
  const auto d = small_corpus(10);
  auto config = small_config();
  config.alphabet_len = 1;
  try {
    run_evaluate(d, config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "breakpoints");
  }
  config = small_config();
  config.train_fraction = 1.5;
  try {
    run_evaluate(d, config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "split");
  }
  config = small_config();
  config.data = "/nonexistent/pixels.csv";
  try {
    load_for_run(config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "load");
  }
}

TEST(FewShot, ShapeSeedsAndDeterminism) {
  const auto d = small_corpus();
  const std::vector<std::size_t> shots{10, 5};
  const std::vector<std::uint64_t> seeds{2024, 21, 32};
  const auto a = run_fewshot(d, small_config(), shots, seeds);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(a[s].shots, shots[s]);
    ASSERT_EQ(a[s].trials.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(a[s].trials[i].seed, seeds[i]);
      EXPECT_EQ(a[s].trials[i].train_size, 3 * shots[s]);
      EXPECT_EQ(a[s].trials[i].test_size, 60u);
    }
    EXPECT_GE(a[s].miou.half_width, 0.0);
  }
  const auto b = run_fewshot(d, small_config(), shots, seeds);
  EXPECT_EQ(fewshot_json(small_config(), a).dump(), fewshot_json(small_config(), b).dump());
  const std::vector<std::uint64_t> one{1};
  EXPECT_THROW(run_fewshot(d, small_config(), shots, one), StageError);
}

TEST(Sweep, AlphabetRowsAndCsv) {
  const auto d = small_corpus(30);
  const std::vector<std::size_t> lengths{2, 12};
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto rows = run_sweep_alphabet(d, small_config(), lengths, seeds, 0.5);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].alphabet_len, 2u);
  EXPECT_EQ(rows[1].trials.size(), 2u);
  const auto csv = sweep_csv(rows, "alphabet_len");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("alphabet_len,", 0), 0u);
  const std::vector<std::size_t> bad{53};
  EXPECT_THROW(run_sweep_alphabet(d, small_config(), bad, seeds, 0.5), StageError);
  const auto j = sweep_json("sweep-alphabet", small_config(), rows, seeds, 0.5);
  EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(Sweep, CompressorRowsUseBackendDefaults) {
  const auto d = small_corpus(20);
  const std::vector<Backend> backends = all_backends();
  const std::vector<std::uint64_t> seeds{5};
  auto config = small_config();
  config.level = 1;
  const auto rows = run_sweep_compressor(d, config, backends, seeds, 0.5);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].compressor, CompressorConfig::make(Backend::gzip));
  EXPECT_EQ(rows[1].compressor, CompressorConfig::make(Backend::bz2));
  EXPECT_EQ(rows[2].compressor, CompressorConfig::make(Backend::zstd));
  const std::vector<Backend> only_gzip{Backend::gzip};
  EXPECT_EQ(run_sweep_compressor(d, config, only_gzip, seeds, 0.5)[0].compressor.level, 1);
}

TEST(Pipeline, LoadsWrittenCorpus) {
  const auto path = std::filesystem::temp_directory_path() / "symncd_pipeline_corpus.csv";
  save_dataset(path, small_corpus(8));
  auto config = small_config();
  config.data = path;
  const auto d = load_for_run(config);
  EXPECT_EQ(d.pixels.size(), 24u);
  EXPECT_EQ(d.timesteps, 24u);
  EXPECT_EQ(d.channels, 6u);
  std::filesystem::remove(path);
}

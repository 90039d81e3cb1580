#include "symncd/pipeline.hpp"

#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>

#include "symncd/classifier.hpp"
#include "symncd/embedding.hpp"
#include "symncd/error.hpp"
#include "symncd/log.hpp"
#include "symncd/parallel.hpp"
#include "symncd/symbolic.hpp"

namespace symncd {

std::string_view extrema_name(ExtremaPolicy policy) noexcept {
  return policy == ExtremaPolicy::all ? "all" : "train";
}

ExtremaPolicy parse_extrema(std::string_view name) {
  if (name == "all") return ExtremaPolicy::all;
  if (name == "train") return ExtremaPolicy::train;
  throw ArgumentError("unknown extrema policy '" + std::string(name) + "' (supported: all, train)");
}

std::vector<std::size_t> default_alphabet_sweep() {
  std::vector<std::size_t> out;
  for (std::size_t l = 2; l <= Alphabet::kMaxSize; l += 5) out.push_back(l);
  return out;
}

namespace {

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<SymbolicEmbedding> embed(const Dataset& dataset, std::span<const std::size_t> indices,
                                     const Breakpoints& breakpoints, const Alphabet& alphabet, std::size_t workers,
                                     std::size_t& clamped) {
  std::vector<SymbolicEmbedding> out(indices.size());
  std::vector<std::size_t> clamp_counts(indices.size(), 0);
  parallel_for(indices.size(), workers, [&](std::size_t i) {
    out[i] = cross_transform(symbolize_pixel(dataset.pixels[indices[i]], breakpoints, alphabet, &clamp_counts[i]));
  });
  for (auto n : clamp_counts) clamped += n;
  return out;
}

std::vector<Label> predict(const Compressor& compressor, std::span<const SymbolicEmbedding> test_embeddings,
                           std::span<const SymbolicEmbedding> train_embeddings, const RunConfig& config,
                           LengthCache* cache) {
  DistanceOptions options;
  options.mode = config.mode;
  options.workers = config.workers;
  options.cache = cache;

  std::vector<Label> out(test_embeddings.size());
  const std::size_t cells = test_embeddings.size() * train_embeddings.size();
  if (cells <= config.stream_threshold) {
    const auto matrix = distance_matrix(compressor, test_embeddings, train_embeddings, options);
    if (config.save_distances) save_distances(*config.save_distances, matrix);
    const auto predictions = classify_all(matrix, config.k, config.workers);
    for (std::size_t i = 0; i < predictions.size(); ++i) out[i] = predictions[i].label;
    return out;
  }

  std::vector<Label> train_labels;
  train_labels.reserve(train_embeddings.size());
  for (const auto& e : train_embeddings) train_labels.push_back(e.label);
  std::optional<DistanceFileWriter> writer;
  if (config.save_distances) writer.emplace(*config.save_distances, test_embeddings.size(), train_labels, config.mode);
  const std::size_t k = std::min(config.k, train_labels.size());
  if (k < config.k) logger()->warn("k={} exceeds the {} training samples; using k={}", config.k, train_labels.size(), k);
  const std::size_t block = std::max<std::size_t>(1, config.stream_threshold / train_embeddings.size());
  stream_distance_rows(compressor, test_embeddings, train_embeddings, options, block,
                       [&](std::size_t row, std::span<const double> distances) {
                         if (writer) writer->write_row(distances);
                         out[row] = knn_predict(distances, train_labels, k).label;
                       });
  if (writer) writer->close();
  return out;
}

}  // namespace

nlohmann::ordered_json config_json(const RunConfig& config) {
  const auto comp = config.compressor();
  nlohmann::ordered_json j;
  j["data"] = config.data.string();
  j["manifest"] = config.manifest ? nlohmann::ordered_json(config.manifest->string()) : nlohmann::ordered_json();
  j["train_fraction"] = config.train_fraction;
  j["alphabet_len"] = config.alphabet_len;
  j["compressor"] = backend_name(comp.backend);
  j["level"] = comp.level;
  j["distance"] = mode_name(config.mode);
  j["k"] = config.k;
  j["seed"] = config.seed;
  j["extrema"] = extrema_name(config.extrema);
  j["min_class_size"] = config.min_class_size;
  j["breakpoints"] = "equal-width";
  j["rng"] = "splitmix64";
  j["ci"] = "student-t, two-sided 95%";
  return j;
}

EvaluationReport evaluate_split(const Dataset& dataset, std::span<const std::size_t> train,
                                std::span<const std::size_t> test, const RunConfig& config, LengthCache* cache) {
  const auto start = std::chrono::steady_clock::now();
  if (train.empty() || test.empty()) throw StageError("split", "train and test sets must both be non-empty");

  const auto compressor = in_stage("config", [&] { return Compressor(config.compressor()); });
  const auto extrema = in_stage("extrema", [&] {
    return config.extrema == ExtremaPolicy::all ? global_extrema(dataset) : global_extrema(dataset, train);
  });
  const auto breakpoints = in_stage("breakpoints", [&] { return build_breakpoints(extrema, config.alphabet_len); });
  const Alphabet alphabet(config.alphabet_len);

  std::size_t clamped = 0;
  const auto train_embeddings =
      in_stage("symbolize", [&] { return embed(dataset, train, breakpoints, alphabet, config.workers, clamped); });
  const auto test_embeddings =
      in_stage("symbolize", [&] { return embed(dataset, test, breakpoints, alphabet, config.workers, clamped); });
  if (clamped > 0) {
    logger()->warn("{} value(s) fell outside the extrema [{}, {}] and were clamped to end symbols", clamped,
                   breakpoints.min(), breakpoints.max());
  }

  const auto predicted =
      in_stage("distance", [&] { return predict(compressor, test_embeddings, train_embeddings, config, cache); });

  return in_stage("metrics", [&] {
    const auto truth = dataset.labels(test);
    const auto train_labels = dataset.labels(train);
    auto report = make_report(confusion(truth, predicted, train_labels));
    report.config = config_json(config);
    report.config["train_size"] = train.size();
    report.config["test_size"] = test.size();
    report.config["extrema_min"] = extrema.min;
    report.config["extrema_max"] = extrema.max;
    report.runtime_seconds = seconds_since(start);
    return report;
  });
}

Dataset load_for_run(const RunConfig& config) {
  return in_stage("load", [&] {
    LoadOptions options;
    options.min_class_size = config.min_class_size;
    auto dataset = load_dataset(config.data, config.manifest, options);
    if (dataset.empty()) throw ArgumentError("dataset has no pixels after filtering");
    return dataset;
  });
}

EvaluationReport run_evaluate(const Dataset& dataset, const RunConfig& config, LengthCache* cache) {
  const auto split = in_stage("split", [&] { return split_stratified(dataset, config.train_fraction, config.seed); });
  return evaluate_split(dataset, split.train, split.test, config, cache);
}

namespace {

TrialResult summarize(std::uint64_t seed, std::size_t n_train, std::size_t n_test, const EvaluationReport& r) {
  return TrialResult{seed, n_train, n_test, r.oa, r.aa, r.miou};
}

template <typename Field>
std::vector<double> collect(const std::vector<TrialResult>& trials, Field field) {
  std::vector<double> out;
  out.reserve(trials.size());
  for (const auto& t : trials) out.push_back(t.*field);
  return out;
}

void require_seeds(std::span<const std::uint64_t> seeds, std::size_t minimum) {
  if (seeds.size() < minimum) {
    throw StageError("config", "need at least " + std::to_string(minimum) + " seed(s), got " +
                                   std::to_string(seeds.size()));
  }
}

SweepRow run_protocol(const Dataset& dataset, const RunConfig& config, std::span<const std::uint64_t> seeds,
                      double fraction, LengthCache& cache) {
  SweepRow row;
  row.alphabet_len = config.alphabet_len;
  row.compressor = config.compressor();
  for (std::uint64_t seed : seeds) {
    const auto split = in_stage("split", [&] { return subsample_protocol(dataset, fraction, seed); });
    const auto report = evaluate_split(dataset, split.train, split.test, config, &cache);
    row.trials.push_back(summarize(seed, split.train.size(), split.test.size(), report));
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  row.mean_oa = mean(collect(row.trials, &TrialResult::oa));
  row.mean_aa = mean(collect(row.trials, &TrialResult::aa));
  row.mean_miou = mean(collect(row.trials, &TrialResult::miou));
  return row;
}

}  // namespace

std::vector<ShotResult> run_fewshot(const Dataset& dataset, const RunConfig& config, std::span<const std::size_t> shots,
                                    std::span<const std::uint64_t> seeds) {
  if (shots.empty()) throw StageError("config", "few-shot needs at least one shot size");
  require_seeds(seeds, 2);
  const auto split = in_stage("split", [&] { return split_stratified(dataset, config.train_fraction, config.seed); });
  LengthCache cache;
  std::vector<ShotResult> results;
  for (std::size_t n : shots) {
    ShotResult shot;
    shot.shots = n;
    for (std::uint64_t seed : seeds) {
      const auto subset = in_stage("fewshot", [&] { return sample_few_shot(dataset, split.train, n, seed); });
      const auto report = evaluate_split(dataset, subset, split.test, config, &cache);
      shot.trials.push_back(summarize(seed, subset.size(), split.test.size(), report));
    }
    shot.oa = aggregate_trials(collect(shot.trials, &TrialResult::oa));
    shot.aa = aggregate_trials(collect(shot.trials, &TrialResult::aa));
    shot.miou = aggregate_trials(collect(shot.trials, &TrialResult::miou));
    results.push_back(std::move(shot));
  }
  return results;
}

std::vector<SweepRow> run_sweep_alphabet(const Dataset& dataset, const RunConfig& config,
                                         std::span<const std::size_t> lengths, std::span<const std::uint64_t> seeds,
                                         double fraction) {
  if (lengths.empty()) throw StageError("config", "alphabet sweep needs at least one length");
  require_seeds(seeds, 1);
  for (std::size_t l : lengths) {
    if (l < Alphabet::kMinSize || l > Alphabet::kMaxSize) {
      throw StageError("config", "alphabet length must be in [2, 52], got " + std::to_string(l));
    }
  }
  LengthCache cache;
  std::vector<SweepRow> rows;
  for (std::size_t l : lengths) {
    RunConfig run = config;
    run.alphabet_len = l;
    rows.push_back(run_protocol(dataset, run, seeds, fraction, cache));
  }
  return rows;
}

std::vector<SweepRow> run_sweep_compressor(const Dataset& dataset, const RunConfig& config,
                                           std::span<const Backend> backends, std::span<const std::uint64_t> seeds,
                                           double fraction) {
  if (backends.empty()) throw StageError("config", "compressor sweep needs at least one backend");
  require_seeds(seeds, 1);
  LengthCache cache;
  std::vector<SweepRow> rows;
  for (Backend b : backends) {
    RunConfig run = config;
    run.backend = b;
    if (backends.size() > 1) run.level.reset();
    rows.push_back(run_protocol(dataset, run, seeds, fraction, cache));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::ordered_json trial_json(const TrialResult& t) {
  nlohmann::ordered_json j;
  j["seed"] = t.seed;
  j["train_size"] = t.train_size;
  j["test_size"] = t.test_size;
  j["oa"] = t.oa;
  j["aa"] = t.aa;
  j["miou"] = t.miou;
  return j;
}

}  // namespace

nlohmann::ordered_json fewshot_json(const RunConfig& config, const std::vector<ShotResult>& results) {
  nlohmann::ordered_json j;
  j["command"] = "fewshot";
  j["config"] = config_json(config);
  auto shots = nlohmann::ordered_json::array();
  for (const auto& s : results) {
    nlohmann::ordered_json entry;
    entry["n"] = s.shots;
    auto seeds = nlohmann::ordered_json::array();
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : s.trials) {
      seeds.push_back(t.seed);
      trials.push_back(trial_json(t));
    }
    entry["seeds"] = seeds;
    entry["trials"] = trials;
    entry["oa"] = to_json(s.oa);
    entry["aa"] = to_json(s.aa);
    entry["miou"] = to_json(s.miou);
    shots.push_back(entry);
  }
  j["shots"] = shots;
  j["runtime_seconds"] = 0.0;
  return j;
}

nlohmann::ordered_json sweep_json(const char* command, const RunConfig& config, const std::vector<SweepRow>& rows,
                                  std::span<const std::uint64_t> seeds, double fraction) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config_json(config);
  j["protocol"] = {{"subsample_fraction", fraction}, {"split", "50/50 per class"},
                   {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())}};
  auto out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["alphabet_len"] = r.alphabet_len;
    row["compressor"] = backend_name(r.compressor.backend);
    row["level"] = r.compressor.level;
    row["mean_miou"] = r.mean_miou;
    row["mean_oa"] = r.mean_oa;
    row["mean_aa"] = r.mean_aa;
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : r.trials) trials.push_back(trial_json(t));
    row["trials"] = trials;
    out.push_back(row);
  }
  j["rows"] = out;
  j["runtime_seconds"] = 0.0;
  return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::string_view key) {
  std::ostringstream out;
  out << std::setprecision(10);
  if (key == "backend") out << "backend,level,alphabet_len";
  else out << "alphabet_len,backend,level";
  out << ",mean_miou,mean_oa,mean_aa";
  if (!rows.empty()) {
    for (const auto& t : rows.front().trials) out << ",miou_seed_" << t.seed;
  }
  out << '\n';
  for (const auto& r : rows) {
    if (key == "backend") out << backend_name(r.compressor.backend) << ',' << r.compressor.level << ',' << r.alphabet_len;
    else out << r.alphabet_len << ',' << backend_name(r.compressor.backend) << ',' << r.compressor.level;
    out << ',' << r.mean_miou << ',' << r.mean_oa << ',' << r.mean_aa;
    for (const auto& t : r.trials) out << ',' << t.miou;
    out << '\n';
  }
  return out.str();
}

}  // namespace symncd

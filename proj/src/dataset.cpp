#include "symncd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "symncd/error.hpp"
#include "symncd/log.hpp"
#include "symncd/rng.hpp"

namespace symncd {

Pixel::Pixel(std::size_t timesteps, std::size_t channels, std::vector<double> values, Label label)
    : timesteps_(timesteps), channels_(channels), values_(std::move(values)), label_(label) {
  if (timesteps_ == 0 || channels_ == 0) throw ArgumentError("pixel needs t >= 1 and c >= 1");
  if (values_.size() != timesteps_ * channels_) {
    throw ArgumentError("pixel holds " + std::to_string(values_.size()) + " values, expected t*c = " +
                        std::to_string(timesteps_ * channels_));
  }
}

std::map<Label, IndexList> Dataset::indices_by_class() const {
  std::map<Label, IndexList> out;
  for (std::size_t i = 0; i < pixels.size(); ++i) out[pixels[i].label()].push_back(i);
  return out;
}

std::map<Label, IndexList> Dataset::indices_by_class(std::span<const std::size_t> subset) const {
  std::map<Label, IndexList> out;
  for (std::size_t i : subset) out[pixels.at(i).label()].push_back(i);
  return out;
}

std::vector<Label> Dataset::labels(std::span<const std::size_t> subset) const {
  std::vector<Label> out;
  out.reserve(subset.size());
  for (std::size_t i : subset) out.push_back(pixels.at(i).label());
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

/// Recognises `# t=<int> c=<int>`; returns false for any other line.
bool parse_dimension_comment(std::string_view line, std::size_t& t, std::size_t& c) {
  line = trim(line);
  if (line.empty() || line.front() != '#') return false;
  std::istringstream in{std::string(line.substr(1))};
  std::string token;
  bool have_t = false;
  bool have_c = false;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const auto key = std::string_view(token).substr(0, eq);
    const auto value = std::string_view(token).substr(eq + 1);
    std::size_t parsed = 0;
    if (!parse_number(value, parsed)) return false;
    if (key == "t") {
      t = parsed;
      have_t = true;
    } else if (key == "c") {
      c = parsed;
      have_c = true;
    }
  }
  return have_t && have_c;
}

void drop_small_classes(Dataset& dataset, std::size_t min_class_size) {
  if (min_class_size <= 1) return;
  const auto by_class = dataset.indices_by_class();
  std::vector<bool> keep(dataset.size(), true);
  bool any_dropped = false;
  for (const auto& [label, members] : by_class) {
    if (members.size() >= min_class_size) continue;
    logger()->warn("dropping class {} ({} samples < minimum class size {})", label,
                   members.size(), min_class_size);
    for (std::size_t i : members) keep[i] = false;
    dataset.class_names.erase(label);
    any_dropped = true;
  }
  if (!any_dropped) return;
  std::vector<Pixel> kept;
  kept.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (keep[i]) kept.push_back(std::move(dataset.pixels[i]));
  }
  dataset.pixels = std::move(kept);
}

}  // namespace

Manifest parse_manifest(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  }
  Manifest m;
  try {
    const auto t = doc.at("t").get<std::int64_t>();
    const auto c = doc.at("c").get<std::int64_t>();
    if (t < 1 || c < 1) throw ValidationError(0, "manifest: t and c must be >= 1");
    m.timesteps = static_cast<std::size_t>(t);
    m.channels = static_cast<std::size_t>(c);
    if (doc.contains("classes")) {
      for (const auto& [key, name] : doc.at("classes").items()) {
        Label id = 0;
        if (!parse_number(std::string_view(key), id)) {
          throw ValidationError(0, "manifest: class id '" + key + "' is not an integer");
        }
        m.class_names[id] = name.get<std::string>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str());
}

Dataset parse_dataset(std::istream& in, const std::optional<Manifest>& manifest,
                      const LoadOptions& options) {
  Dataset dataset;
  std::size_t t = manifest ? manifest->timesteps : 0;
  std::size_t c = manifest ? manifest->channels : 0;
  if (manifest) dataset.class_names = manifest->class_names;

  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  bool header_seen = false;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::size_t ct = 0;
      std::size_t cc = 0;
      if (!header_seen && parse_dimension_comment(text, ct, cc)) {
        if (ct == 0 || cc == 0) throw DimensionError(line_no, "t and c must be >= 1");
        if (manifest && (ct != t || cc != c)) {
          throw DimensionError(line_no, "dimension line disagrees with manifest (t=" +
                                            std::to_string(t) + " c=" + std::to_string(c) + ")");
        }
        t = ct;
        c = cc;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      const auto fields = split_fields(text);
      if (fields.empty() || fields.front() != "label") {
        throw ParseError(line_no, "header must start with 'label'");
      }
      if (t == 0 || c == 0) {
        throw DimensionError(line_no, "t and c unknown: supply a manifest or a '# t=<int> c=<int>' line");
      }
      width = t * c;
      if (fields.size() != width + 1) {
        throw DimensionError(line_no, "header has " + std::to_string(fields.size() - 1) +
                                          " value columns, expected t*c = " + std::to_string(width));
      }
      continue;
    }

    ++row;
    const auto fields = split_fields(text);
    if (fields.size() != width + 1) {
      throw DimensionError(line_no, row,
                           "expected " + std::to_string(width) + " values, got " +
                               std::to_string(fields.size() - 1));
    }
    Label label = 0;
    if (!parse_number(fields[0], label) || label < 0) {
      throw ParseError(line_no, row, "label '" + std::string(fields[0]) + "' is not a non-negative integer");
    }
    std::vector<double> values(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!parse_number(fields[k + 1], values[k])) {
        throw ParseError(line_no, row, "column " + std::to_string(k + 2) + ": '" +
                                           std::string(fields[k + 1]) + "' is not a number");
      }
      if (!std::isfinite(values[k])) {
        throw ValidationError(line_no, row, "column " + std::to_string(k + 2) + " is not finite");
      }
    }
    dataset.pixels.emplace_back(t, c, std::move(values), label);
  }
  if (!header_seen) throw ParseError(0, "missing header line");

  dataset.timesteps = t;
  dataset.channels = c;
  drop_small_classes(dataset, options.min_class_size);
  return dataset;
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<std::filesystem::path>& manifest_path,
                     const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open dataset " + path.string());
  std::optional<Manifest> manifest;
  if (manifest_path) manifest = load_manifest(*manifest_path);
  return parse_dataset(in, manifest, options);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "# t=" << dataset.timesteps << " c=" << dataset.channels << '\n';
  out << "label";
  for (std::size_t k = 1; k <= dataset.timesteps * dataset.channels; ++k) out << ",v" << k;
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : dataset.pixels) {
    out << p.label();
    for (double v : p.values()) out << ',' << v;
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path.string());
  write_dataset(out, dataset);
}

// ---------------------------------------------------------------------------
// Extrema

Extrema global_extrema(const Dataset& dataset) {
  if (dataset.empty()) throw ArgumentError("global_extrema: empty dataset");
  Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : dataset.pixels) {
    const auto [lo, hi] = std::minmax_element(p.values().begin(), p.values().end());
    e.min = std::min(e.min, *lo);
    e.max = std::max(e.max, *hi);
  }
  return e;
}

Extrema global_extrema(const Dataset& dataset, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ArgumentError("global_extrema: empty subset");
  Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i : subset) {
    const auto values = dataset.pixels.at(i).values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    e.min = std::min(e.min, *lo);
    e.max = std::max(e.max, *hi);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Splitting and sampling

namespace {

// Absorbs representation error so that e.g. 0.7 * 10 rounds up to 7, not 8.
constexpr double kCeilSlack = 1e-9;

std::size_t ceil_share(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(count) - kCeilSlack));
}

void require_open_fraction(double fraction, const char* what) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError(std::string(what) + " must lie in the open interval (0, 1), got " +
                        std::to_string(fraction));
  }
}

}  // namespace

Split split_stratified(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  require_open_fraction(train_fraction, "train fraction");
  if (dataset.empty()) throw ArgumentError("split_stratified: empty dataset");
  Split split;
  split.seed = seed;
  SplitMix64 rng(seed);
  for (auto& [label, members] : dataset.indices_by_class()) {
    auto stream = rng.split();
    shuffle(members, stream);
    std::size_t n_train = std::max<std::size_t>(1, ceil_share(train_fraction, members.size()));
    if (members.size() >= 2) n_train = std::min(n_train, members.size() - 1);
    split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
    split.test.insert(split.test.end(), members.begin() + n_train, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

IndexList sample_few_shot(const Dataset& dataset, std::span<const std::size_t> train_pool,
                          std::size_t shots, std::uint64_t seed) {
  if (shots < 1) throw ArgumentError("few-shot n must be >= 1");
  if (train_pool.empty()) throw ArgumentError("sample_few_shot: empty train pool");
  IndexList out;
  SplitMix64 rng(seed);
  for (const auto& [label, members] : dataset.indices_by_class(train_pool)) {
    auto stream = rng.split();
    if (members.size() < shots) {
      logger()->warn("class {} has {} samples in the train pool, fewer than n={}; using all of them",
                     label, members.size(), shots);
    }
    const auto drawn = sample_without_replacement(members, shots, stream);
    out.insert(out.end(), drawn.begin(), drawn.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Split subsample_protocol(const Dataset& dataset, double fraction, std::uint64_t seed) {
  require_open_fraction(fraction, "subsample fraction");
  if (dataset.empty()) throw ArgumentError("subsample_protocol: empty dataset");
  Split split;
  split.seed = seed;
  SplitMix64 rng(seed);
  for (auto& [label, members] : dataset.indices_by_class()) {
    auto stream = rng.split();
    shuffle(members, stream);
    const std::size_t floor_take = std::min<std::size_t>(2, members.size());
    const std::size_t take = std::clamp(ceil_share(fraction, members.size()), floor_take, members.size());
    const std::size_t n_train = (take + 1) / 2;
    split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
    split.test.insert(split.test.end(), members.begin() + n_train, members.begin() + take);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace symncd

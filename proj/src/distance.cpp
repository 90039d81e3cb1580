#include "symncd/distance.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "symncd/error.hpp"
#include "symncd/log.hpp"
#include "symncd/parallel.hpp"

namespace symncd {

static_assert(std::endian::native == std::endian::little, "distance files assume a little-endian host");

std::string_view mode_name(DistanceMode mode) noexcept {
  return mode == DistanceMode::multiscale ? "multiscale" : "whole";
}

DistanceMode parse_mode(std::string_view name) {
  if (name == "multiscale") return DistanceMode::multiscale;
  if (name == "whole") return DistanceMode::whole;
  throw ArgumentError("unknown distance mode '" + std::string(name) + "' (supported: multiscale, whole)");
}

double ncd(const Compressor& compressor, std::string_view m, std::string_view n, LengthCache* cache) {
  const auto cm = compressed_length(compressor, m, cache);
  const auto cn = compressed_length(compressor, n, cache);
  return ncd_from_lengths(cm, cn, compressor.joint_compressed_length(m, n));
}

namespace {

void require_same_shape(const SymbolicEmbedding& a, const SymbolicEmbedding& b) {
  if (!a.same_shape(b) || a.size() != b.size()) {
    throw ArgumentError("embedding shape mismatch: " + std::to_string(a.timesteps) + "x" +
                        std::to_string(a.channels) + " vs " + std::to_string(b.timesteps) + "x" +
                        std::to_string(b.channels));
  }
}

/// Per-embedding compressed lengths: one per component (multiscale) or one
/// for the flattened sequence (whole).
struct Prepared {
  std::vector<std::string> parts;
  std::vector<std::size_t> lengths;
};

Prepared prepare(const Compressor& compressor, const SymbolicEmbedding& e, DistanceMode mode, LengthCache* cache) {
  Prepared p;
  if (mode == DistanceMode::whole) {
    p.parts.push_back(flatten(e));
  } else {
    p.parts = e.components;
  }
  p.lengths.reserve(p.parts.size());
  for (const auto& part : p.parts) p.lengths.push_back(compressed_length(compressor, part, cache));
  return p;
}

double pair_distance(const Compressor& compressor, const Prepared& test, const Prepared& train) {
  double sum = 0.0;
  for (std::size_t k = 0; k < test.parts.size(); ++k) {
    const auto joint = compressor.joint_compressed_length(test.parts[k], train.parts[k]);
    sum += ncd_from_lengths(test.lengths[k], train.lengths[k], joint);
  }
  return sum / static_cast<double>(test.parts.size());
}

void validate_inputs(std::span<const SymbolicEmbedding> test, std::span<const SymbolicEmbedding> train) {
  if (test.empty() || train.empty()) throw ArgumentError("distance matrix needs non-empty test and train lists");
  const auto& ref = train.front();
  for (const auto& e : train) require_same_shape(ref, e);
  for (const auto& e : test) require_same_shape(ref, e);
}

std::vector<Prepared> prepare_all(const Compressor& compressor, std::span<const SymbolicEmbedding> items,
                                  const DistanceOptions& options) {
  std::vector<Prepared> out(items.size());
  parallel_for(items.size(), options.workers,
               [&](std::size_t i) { out[i] = prepare(compressor, items[i], options.mode, options.cache); });
  return out;
}

void compute_rows(const Compressor& compressor, std::span<const SymbolicEmbedding> test,
                  const std::vector<Prepared>& train, const DistanceOptions& options, std::size_t first,
                  std::size_t count, std::vector<double>& out) {
  const std::size_t cols = train.size();
  out.resize(count * cols);
  parallel_for(count, options.workers, [&](std::size_t r) {
    const Prepared row_side = prepare(compressor, test[first + r], options.mode, options.cache);
    double* dst = out.data() + r * cols;
    for (std::size_t q = 0; q < cols; ++q) dst[q] = pair_distance(compressor, row_side, train[q]);
  });
}

void check_soft_bound(std::span<const double> values) {
  std::size_t over = 0;
  double worst = 0.0;
  for (double v : values) {
    if (v > kSoftDistanceBound) {
      ++over;
      worst = std::max(worst, v);
    }
  }
  if (over) logger()->warn("{} distance(s) exceed {} (max {:.4f})", over, kSoftDistanceBound, worst);
}

std::vector<Label> labels_of(std::span<const SymbolicEmbedding> items) {
  std::vector<Label> out;
  out.reserve(items.size());
  for (const auto& e : items) out.push_back(e.label);
  return out;
}

}  // namespace

double mncd(const Compressor& compressor, const SymbolicEmbedding& test, const SymbolicEmbedding& train,
            LengthCache* cache) {
  require_same_shape(test, train);
  return pair_distance(compressor, prepare(compressor, test, DistanceMode::multiscale, cache),
                       prepare(compressor, train, DistanceMode::multiscale, cache));
}

double whole_ncd(const Compressor& compressor, const SymbolicEmbedding& test, const SymbolicEmbedding& train,
                 LengthCache* cache) {
  require_same_shape(test, train);
  return ncd(compressor, flatten(test), flatten(train), cache);
}

DistanceMatrix distance_matrix(const Compressor& compressor, std::span<const SymbolicEmbedding> test,
                               std::span<const SymbolicEmbedding> train, const DistanceOptions& options) {
  validate_inputs(test, train);
  DistanceMatrix m;
  m.rows = test.size();
  m.cols = train.size();
  m.mode = options.mode;
  m.train_labels = labels_of(train);
  const auto prepared = prepare_all(compressor, train, options);
  compute_rows(compressor, test, prepared, options, 0, test.size(), m.values);
  check_soft_bound(m.values);
  return m;
}

void stream_distance_rows(const Compressor& compressor, std::span<const SymbolicEmbedding> test,
                          std::span<const SymbolicEmbedding> train, const DistanceOptions& options,
                          std::size_t block_rows, const RowSink& sink) {
  validate_inputs(test, train);
  if (block_rows == 0) block_rows = 1;
  const auto prepared = prepare_all(compressor, train, options);
  const std::size_t cols = train.size();
  std::vector<double> block;
  for (std::size_t first = 0; first < test.size(); first += block_rows) {
    const std::size_t count = std::min(block_rows, test.size() - first);
    compute_rows(compressor, test, prepared, options, first, count, block);
    check_soft_bound(block);
    for (std::size_t r = 0; r < count; ++r) sink(first + r, {block.data() + r * cols, cols});
  }
}

// ---------------------------------------------------------------------------
// Binary persistence

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) throw ParseError(0, "distance file truncated");
  return value;
}

void write_header(std::ostream& out, std::size_t rows, std::span<const Label> labels, DistanceMode mode) {
  out.write(kDistanceMagic.data(), static_cast<std::streamsize>(kDistanceMagic.size()));
  put<std::uint64_t>(out, rows);
  put<std::uint64_t>(out, labels.size());
  put<std::uint32_t>(out, mode == DistanceMode::multiscale ? 0u : 1u);
  put<std::uint32_t>(out, 0u);
  for (Label l : labels) put<std::int64_t>(out, l);
}

}  // namespace

struct DistanceFileWriter::Impl {
  std::ofstream out;
  std::filesystem::path path;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t written = 0;
};

DistanceFileWriter::DistanceFileWriter(const std::filesystem::path& path, std::size_t rows,
                                       std::span<const Label> train_labels, DistanceMode mode)
    : impl_(std::make_unique<Impl>()) {
  impl_->out.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->out) throw ArgumentError("cannot write distances to " + path.string());
  impl_->path = path;
  impl_->rows = rows;
  impl_->cols = train_labels.size();
  write_header(impl_->out, rows, train_labels, mode);
}

DistanceFileWriter::~DistanceFileWriter() = default;

void DistanceFileWriter::write_row(std::span<const double> row) {
  if (row.size() != impl_->cols) throw ArgumentError("distance row has the wrong width");
  if (impl_->written == impl_->rows) throw ArgumentError("more distance rows than declared");
  impl_->out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size_bytes()));
  ++impl_->written;
}

void DistanceFileWriter::close() {
  if (impl_->written != impl_->rows) {
    throw ArgumentError("distance file " + impl_->path.string() + " closed after " + std::to_string(impl_->written) +
                        " of " + std::to_string(impl_->rows) + " rows");
  }
  impl_->out.close();
  if (!impl_->out) throw ArgumentError("failed writing " + impl_->path.string());
}

void save_distances(const std::filesystem::path& path, const DistanceMatrix& matrix) {
  DistanceFileWriter writer(path, matrix.rows, matrix.train_labels, matrix.mode);
  for (std::size_t r = 0; r < matrix.rows; ++r) writer.write_row(matrix.row(r));
  writer.close();
}

DistanceMatrix load_distances(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open distance file " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::string_view(magic, sizeof magic) != kDistanceMagic) {
    throw ParseError(0, path.string() + " is not a distance matrix file");
  }
  DistanceMatrix m;
  m.rows = get<std::uint64_t>(in);
  m.cols = get<std::uint64_t>(in);
  const auto mode = get<std::uint32_t>(in);
  if (mode > 1) throw ParseError(0, "distance file: unknown mode " + std::to_string(mode));
  m.mode = mode == 0 ? DistanceMode::multiscale : DistanceMode::whole;
  get<std::uint32_t>(in);
  m.train_labels.resize(m.cols);
  for (auto& l : m.train_labels) l = get<std::int64_t>(in);
  m.values.resize(m.rows * m.cols);
  if (!in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(m.values.size() * sizeof(double)))) {
    throw ParseError(0, "distance file truncated");
  }
  return m;
}

}  // namespace symncd

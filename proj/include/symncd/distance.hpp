#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symncd/compressors.hpp"
#include "symncd/embedding.hpp"

namespace symncd {

enum class DistanceMode { multiscale, whole };

std::string_view mode_name(DistanceMode mode) noexcept;
DistanceMode parse_mode(std::string_view name);

/// (C(m||n) - min(C(m), C(n))) / max(C(m), C(n)) from precomputed lengths.
inline double ncd_from_lengths(std::size_t cm, std::size_t cn, std::size_t cmn) noexcept {
  const auto lo = static_cast<double>(cm < cn ? cm : cn);
  const auto hi = static_cast<double>(cm < cn ? cn : cm);
  return (static_cast<double>(cmn) - lo) / hi;
}

/// NCD with m on the test side: the joint term compresses m||n.
double ncd(const Compressor& compressor, std::string_view m, std::string_view n, LengthCache* cache = nullptr);

/// Mean of per-component NCDs over all c + t components.
double mncd(const Compressor& compressor, const SymbolicEmbedding& test, const SymbolicEmbedding& train,
            LengthCache* cache = nullptr);

/// NCD of the flattened embeddings.
double whole_ncd(const Compressor& compressor, const SymbolicEmbedding& test, const SymbolicEmbedding& train,
                 LengthCache* cache = nullptr);

/// Dense |test| x |train| grid, row-major. Rows follow test order, columns train order.
struct DistanceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<Label> train_labels;
  DistanceMode mode = DistanceMode::multiscale;

  double at(std::size_t row, std::size_t col) const noexcept { return values[row * cols + col]; }
  std::span<const double> row(std::size_t r) const noexcept { return {values.data() + r * cols, cols}; }
};

struct DistanceOptions {
  DistanceMode mode = DistanceMode::multiscale;
  /// 0 = hardware concurrency.
  std::size_t workers = 0;
  /// Optional shared cache for single-sequence lengths.
  LengthCache* cache = nullptr;
};

/// Entries above this are logged (never clamped).
inline constexpr double kSoftDistanceBound = 1.25;

DistanceMatrix distance_matrix(const Compressor& compressor, std::span<const SymbolicEmbedding> test,
                               std::span<const SymbolicEmbedding> train, const DistanceOptions& options = {});

/// Same values as distance_matrix, delivered to `sink` one row at a time in
/// test order, computing `block_rows` rows in parallel at a time. Memory is
/// O(block_rows * |train|).
using RowSink = std::function<void(std::size_t row, std::span<const double> distances)>;
void stream_distance_rows(const Compressor& compressor, std::span<const SymbolicEmbedding> test,
                          std::span<const SymbolicEmbedding> train, const DistanceOptions& options,
                          std::size_t block_rows, const RowSink& sink);

// Binary layout (little-endian):
//   0  char[8]  magic "SYMNCDM1"
//   8  u64      rows
//  16  u64      cols
//  24  u32      mode (0 = multiscale, 1 = whole)
//  28  u32      reserved, 0
//  32  i64[cols]        train labels
//  ..  f64[rows*cols]   distances, row-major
inline constexpr std::string_view kDistanceMagic = "SYMNCDM1";

void save_distances(const std::filesystem::path& path, const DistanceMatrix& matrix);
DistanceMatrix load_distances(const std::filesystem::path& path);

/// Incremental writer for the same layout, used with stream_distance_rows.
class DistanceFileWriter {
 public:
  DistanceFileWriter(const std::filesystem::path& path, std::size_t rows, std::span<const Label> train_labels,
                     DistanceMode mode);
  ~DistanceFileWriter();
  DistanceFileWriter(const DistanceFileWriter&) = delete;
  DistanceFileWriter& operator=(const DistanceFileWriter&) = delete;

  void write_row(std::span<const double> row);
  /// Throws when fewer rows than declared were written.
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace symncd

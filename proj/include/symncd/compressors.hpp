#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symncd {

enum class Backend { gzip, bz2, zstd };

std::string_view backend_name(Backend backend) noexcept;
/// Accepts "gzip", "bz2", "zstd". Unknown ids throw ArgumentError listing the supported ones.
Backend parse_backend(std::string_view name);
std::vector<Backend> all_backends();

/// gzip: 9 (maximum, the gzip-module default), bz2: 9, zstd: 3.
int default_level(Backend backend) noexcept;
/// Inclusive [lo, hi] accepted by the backend.
std::pair<int, int> level_range(Backend backend) noexcept;

struct CompressorConfig {
  Backend backend = Backend::gzip;
  int level = 9;

  /// Validates the level; std::nullopt picks the backend default.
  static CompressorConfig make(Backend backend, std::optional<int> level = std::nullopt);

  /// e.g. "gzip:9". Used as the cache namespace and in report metadata.
  std::string id() const;

  friend bool operator==(const CompressorConfig&, const CompressorConfig&) = default;
};

/// Deterministic lossless backend. Stateless from the caller's view and safe
/// to share between threads (scratch state is thread-local).
///
/// Lengths count the whole container: gzip framing (10-octet header with
/// zero mtime and no file name, 8-octet trailer), the bzip2 stream header,
/// or the zstd frame header.
class Compressor {
 public:
  explicit Compressor(CompressorConfig config) : config_(config) {}

  const CompressorConfig& config() const noexcept { return config_; }

  std::string compress(std::string_view data) const;
  std::string decompress(std::string_view data) const;

  /// C(seq). Throws ArgumentError on an empty sequence.
  std::size_t compressed_length(std::string_view seq) const;
  /// C(m || n), concatenated in that order with no separator.
  std::size_t joint_compressed_length(std::string_view m, std::string_view n) const;

 private:
  std::size_t raw_length(std::string_view data) const;

  CompressorConfig config_;
};

/// Memoized C(seq) keyed by (compressor config, exact sequence content).
/// Concurrent lookups take a shared lock; inserts are serialized.
class LengthCache {
 public:
  std::size_t length(const Compressor& compressor, std::string_view seq);

  std::size_t size() const;
  std::size_t hits() const noexcept { return hits_.load(std::memory_order_relaxed); }
  std::size_t misses() const noexcept { return misses_.load(std::memory_order_relaxed); }
  void clear();

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  using Table = std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>>;

  mutable std::shared_mutex mutex_;
  std::map<std::string, Table, std::less<>> tables_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

/// C(seq) through `cache` when given, direct otherwise. Both paths return
/// the same value.
std::size_t compressed_length(const Compressor& compressor, std::string_view seq, LengthCache* cache = nullptr);
std::size_t joint_compressed_length(const Compressor& compressor, std::string_view m, std::string_view n);

}  // namespace symncd

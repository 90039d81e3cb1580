#include "symncd/compressors.hpp"

#include <mutex>

#include <boost/iostreams/copy.hpp>
#include <boost/iostreams/device/array.hpp>
#include <boost/iostreams/device/back_inserter.hpp>
#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/zstd.hpp>
#include <boost/iostreams/filtering_stream.hpp>
#include <zlib.h>

#include "symncd/error.hpp"

namespace symncd {

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::gzip: return "gzip";
    case Backend::bz2: return "bz2";
    case Backend::zstd: return "zstd";
  }
  return "?";
}

Backend parse_backend(std::string_view name) {
  for (Backend b : all_backends()) {
    if (backend_name(b) == name) return b;
  }
  throw ArgumentError("unknown compressor '" + std::string(name) + "' (supported: gzip, bz2, zstd)");
}

std::vector<Backend> all_backends() { return {Backend::gzip, Backend::bz2, Backend::zstd}; }

int default_level(Backend backend) noexcept {
  switch (backend) {
    case Backend::gzip: return Z_BEST_COMPRESSION;
    case Backend::bz2: return 9;
    case Backend::zstd: return 3;
  }
  return 0;
}

std::pair<int, int> level_range(Backend backend) noexcept {
  switch (backend) {
    case Backend::gzip: return {0, 9};
    case Backend::bz2: return {1, 9};
    case Backend::zstd: return {1, 22};
  }
  return {0, 0};
}

CompressorConfig CompressorConfig::make(Backend backend, std::optional<int> level) {
  CompressorConfig config{backend, level.value_or(default_level(backend))};
  const auto [lo, hi] = level_range(backend);
  if (config.level < lo || config.level > hi) {
    throw ArgumentError(std::string(backend_name(backend)) + " level must be in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "], got " + std::to_string(config.level));
  }
  return config;
}

std::string CompressorConfig::id() const {
  return std::string(backend_name(backend)) + ":" + std::to_string(level);
}

// ---------------------------------------------------------------------------
// gzip via zlib: windowBits 15 + 16 selects gzip framing; memLevel 8 and the
// default strategy match the Python gzip module's deflate settings.

namespace {

constexpr int kGzipWindowBits = 15 + 16;
constexpr int kGzipMemLevel = 8;

class GzipStream {
 public:
  explicit GzipStream(int level) : level_(level) {
    if (deflateInit2(&zs_, level, Z_DEFLATED, kGzipWindowBits, kGzipMemLevel, Z_DEFAULT_STRATEGY) != Z_OK) {
      throw CompressionError("deflateInit2 failed");
    }
  }
  ~GzipStream() { deflateEnd(&zs_); }
  GzipStream(const GzipStream&) = delete;
  GzipStream& operator=(const GzipStream&) = delete;

  int level() const noexcept { return level_; }

  /// Compresses into `out` (resized to the compressed size).
  void run(std::string_view data, std::string& out) {
    if (deflateReset(&zs_) != Z_OK) throw CompressionError("deflateReset failed");
    out.resize(deflateBound(&zs_, static_cast<uLong>(data.size())));
    zs_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs_.avail_in = static_cast<uInt>(data.size());
    zs_.next_out = reinterpret_cast<Bytef*>(out.data());
    zs_.avail_out = static_cast<uInt>(out.size());
    if (deflate(&zs_, Z_FINISH) != Z_STREAM_END) throw CompressionError("deflate did not finish");
    out.resize(zs_.total_out);
  }

 private:
  z_stream zs_{};
  int level_;
};

GzipStream& gzip_stream(int level) {
  // One stream per thread and level; deflateReset reuses the allocations.
  thread_local std::map<int, std::unique_ptr<GzipStream>> streams;
  auto& slot = streams[level];
  if (!slot) slot = std::make_unique<GzipStream>(level);
  return *slot;
}

std::string gzip_decompress(std::string_view data) {
  z_stream zs{};
  if (inflateInit2(&zs, kGzipWindowBits) != Z_OK) throw CompressionError("inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char chunk[16384];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(chunk);
    zs.avail_out = sizeof chunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw CompressionError("gzip stream is corrupt");
    }
    out.append(chunk, sizeof chunk - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw CompressionError("gzip stream is truncated");
    }
  }
  inflateEnd(&zs);
  return out;
}

template <typename Filter>
std::string run_filter(Filter filter, std::string_view data) {
  namespace io = boost::iostreams;
  std::string out;
  try {
    io::filtering_ostream os;
    os.push(std::move(filter));
    os.push(io::back_inserter(out));
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    os.reset();
  } catch (const std::exception& e) {
    throw CompressionError(e.what());
  }
  return out;
}

}  // namespace

std::string Compressor::compress(std::string_view data) const {
  namespace io = boost::iostreams;
  switch (config_.backend) {
    case Backend::gzip: {
      std::string out;
      gzip_stream(config_.level).run(data, out);
      return out;
    }
    case Backend::bz2:
      return run_filter(io::bzip2_compressor(io::bzip2_params(config_.level)), data);
    case Backend::zstd:
      return run_filter(io::zstd_compressor(io::zstd_params(static_cast<std::uint32_t>(config_.level))), data);
  }
  throw CompressionError("unknown backend");
}

std::string Compressor::decompress(std::string_view data) const {
  namespace io = boost::iostreams;
  switch (config_.backend) {
    case Backend::gzip: return gzip_decompress(data);
    case Backend::bz2: return run_filter(io::bzip2_decompressor(), data);
    case Backend::zstd: return run_filter(io::zstd_decompressor(), data);
  }
  throw CompressionError("unknown backend");
}

std::size_t Compressor::raw_length(std::string_view data) const {
  if (config_.backend == Backend::gzip) {
    thread_local std::string scratch;
    gzip_stream(config_.level).run(data, scratch);
    return scratch.size();
  }
  return compress(data).size();
}

std::size_t Compressor::compressed_length(std::string_view seq) const {
  if (seq.empty()) throw ArgumentError("compressed length of an empty sequence is undefined");
  return raw_length(seq);
}

std::size_t Compressor::joint_compressed_length(std::string_view m, std::string_view n) const {
  if (m.empty() || n.empty()) throw ArgumentError("joint compressed length needs two non-empty sequences");
  thread_local std::string joined;
  joined.assign(m);
  joined.append(n);
  return raw_length(joined);
}

// ---------------------------------------------------------------------------

std::size_t LengthCache::length(const Compressor& compressor, std::string_view seq) {
  const std::string config_id = compressor.config().id();
  {
    std::shared_lock lock(mutex_);
    if (auto t = tables_.find(config_id); t != tables_.end()) {
      if (auto hit = t->second.find(seq); hit != t->second.end()) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return hit->second;
      }
    }
  }
  const std::size_t value = compressor.compressed_length(seq);
  misses_.fetch_add(1, std::memory_order_relaxed);
  std::unique_lock lock(mutex_);
  tables_[config_id].emplace(std::string(seq), value);
  return value;
}

std::size_t LengthCache::size() const {
  std::shared_lock lock(mutex_);
  std::size_t total = 0;
  for (const auto& [id, table] : tables_) total += table.size();
  return total;
}

void LengthCache::clear() {
  std::unique_lock lock(mutex_);
  tables_.clear();
  hits_ = 0;
  misses_ = 0;
}

std::size_t compressed_length(const Compressor& compressor, std::string_view seq, LengthCache* cache) {
  return cache ? cache->length(compressor, seq) : compressor.compressed_length(seq);
}

std::size_t joint_compressed_length(const Compressor& compressor, std::string_view m, std::string_view n) {
  return compressor.joint_compressed_length(m, n);
}

}  // namespace symncd

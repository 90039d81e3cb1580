#include <random>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "symncd/compressors.hpp"
#include "symncd/error.hpp"

using namespace symncd;

namespace {

Compressor make(Backend b) { return Compressor(CompressorConfig::make(b)); }

}  // namespace

TEST(CompressorConfig, DefaultsAndValidation) {
  EXPECT_EQ(CompressorConfig::make(Backend::gzip).level, 9);
  EXPECT_EQ(CompressorConfig::make(Backend::bz2).level, 9);
  EXPECT_EQ(CompressorConfig::make(Backend::zstd).level, 3);
  EXPECT_EQ(CompressorConfig::make(Backend::zstd, 19).id(), "zstd:19");
  EXPECT_THROW(CompressorConfig::make(Backend::gzip, 10), ArgumentError);
  EXPECT_THROW(CompressorConfig::make(Backend::bz2, 0), ArgumentError);
  EXPECT_EQ(parse_backend("bz2"), Backend::bz2);
  try {
    parse_backend("lzma");
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("gzip, bz2, zstd"), std::string::npos);
  }
}

TEST(Compressor, RoundTripAllBackends) {
  std::mt19937_64 gen(1);
  for (Backend b : all_backends()) {
    const auto c = make(b);
    for (std::size_t len : {1u, 17u, 500u, 70000u}) {
      const auto s = oracle::random_symbols(gen, len, 22);
      EXPECT_EQ(c.decompress(c.compress(s)), s) << backend_name(b) << " len " << len;
      EXPECT_EQ(c.compressed_length(s), c.compress(s).size());
    }
  }
  EXPECT_THROW(make(Backend::gzip).decompress("not gzip"), CompressionError);
}

TEST(Compressor, GzipLengthMatchesReferenceFraming) {
  std::mt19937_64 gen(2);
  const auto c = make(Backend::gzip);
  for (int i = 0; i < 50; ++i) {
    const auto s = oracle::random_symbols(gen, 1 + gen() % 400, 1 + gen() % 52);
    ASSERT_EQ(c.compressed_length(s), oracle::gzip_len(s));
  }
  // Container: 10-octet header with zero mtime, 8-octet trailer.
  const auto blob = c.compress("abc");
  EXPECT_EQ(static_cast<unsigned char>(blob[0]), 0x1f);
  EXPECT_EQ(static_cast<unsigned char>(blob[1]), 0x8b);
  for (int i = 4; i < 8; ++i) EXPECT_EQ(blob[i], 0);
}

TEST(Compressor, RedundantCompressesBetterThanRandom) {
  std::mt19937_64 gen(3);
  const auto random = oracle::random_symbols(gen, 1000, 22);
  for (Backend b : all_backends()) {
    const auto c = make(b);
    EXPECT_LT(c.compressed_length(std::string(1000, 'a')), c.compressed_length(random)) << backend_name(b);
  }
  // Measured with gzip-9: 29 vs ~617 octets.
  EXPECT_EQ(make(Backend::gzip).compressed_length(std::string(1000, 'a')), 29u);
}

TEST(Compressor, GzipOverheadFloor) {
  const auto c = make(Backend::gzip);
  std::mt19937_64 gen(4);
  for (int i = 0; i < 100; ++i) {
    const auto s = oracle::random_symbols(gen, 1 + gen() % 50, 52);
    ASSERT_GE(c.compressed_length(s), 18u);
    ASSERT_GE(c.joint_compressed_length(s, s), 18u);
  }
  EXPECT_EQ(c.compressed_length("a"), 21u);
}

TEST(Compressor, DeterministicAcrossCalls) {
  std::mt19937_64 gen(5);
  for (Backend b : all_backends()) {
    const auto c = make(b);
    const auto s = oracle::random_symbols(gen, 300, 22);
    std::set<std::size_t> seen;
    for (int i = 0; i < 100; ++i) seen.insert(c.compressed_length(s));
    EXPECT_EQ(seen.size(), 1u) << backend_name(b);
  }
}

TEST(Compressor, SelfConcatenationIsSubadditive) {
  const auto c = make(Backend::gzip);
  const std::string m = [] {
    std::string s;
    for (int i = 0; i < 200; ++i) s += "ab";
    return s;
  }();
  EXPECT_LE(c.joint_compressed_length(m, m), 2 * c.compressed_length(m));
  std::mt19937_64 gen(6);
  for (int i = 0; i < 200; ++i) {
    // Repetitive structure: a random motif tiled to >= 64 symbols.
    const auto motif = oracle::random_symbols(gen, 2 + gen() % 12, 22);
    std::string s;
    while (s.size() < 64 + gen() % 200) s += motif;
    for (Backend b : all_backends()) {
      const auto comp = make(b);
      const std::size_t overhead = comp.compressed_length("a");
      ASSERT_LT(comp.joint_compressed_length(s, s) + overhead, 2 * comp.compressed_length(s)) << backend_name(b);
    }
  }
}

TEST(Compressor, JointOrderAsymmetryIsSmall) {
  const auto c = make(Backend::gzip);
  std::mt19937_64 gen(7);
  std::size_t max_diff = 0;
  for (int i = 0; i < 100; ++i) {
    const auto m = oracle::random_symbols(gen, 200, 22);
    const auto n = oracle::random_symbols(gen, 200, 22);
    const auto mn = c.joint_compressed_length(m, n), nm = c.joint_compressed_length(n, m);
    max_diff = std::max(max_diff, mn > nm ? mn - nm : nm - mn);
    ASSERT_LT(static_cast<double>(mn > nm ? mn - nm : nm - mn), 0.05 * static_cast<double>(std::min(mn, nm)));
  }
  RecordProperty("max_joint_order_difference", static_cast<int>(max_diff));
}

TEST(Compressor, EmptySequenceRejected) {
  const auto c = make(Backend::gzip);
  EXPECT_THROW(c.compressed_length(""), ArgumentError);
  EXPECT_THROW(c.joint_compressed_length("", "a"), ArgumentError);
  LengthCache cache;
  EXPECT_THROW(cache.length(c, ""), ArgumentError);
}

TEST(LengthCache, HitsReturnFreshValues) {
  LengthCache cache;
  const auto gz = make(Backend::gzip);
  const auto zs = make(Backend::zstd);
  std::mt19937_64 gen(8);
  std::vector<std::string> seqs;
  for (int i = 0; i < 40; ++i) seqs.push_back(oracle::random_symbols(gen, 5 + gen() % 100, 22));
  for (int round = 0; round < 3; ++round) {
    for (const auto& s : seqs) {
      ASSERT_EQ(cache.length(gz, s), gz.compressed_length(s));
      ASSERT_EQ(cache.length(zs, s), zs.compressed_length(s));
    }
  }
  EXPECT_EQ(cache.size(), 80u);
  EXPECT_EQ(cache.misses(), 80u);
  EXPECT_EQ(cache.hits(), 160u);
  cache.clear();
  EXPECT_EQ(cache.size(), 0u);
}

TEST(LengthCache, ConcurrentReadersAndWriters) {
  LengthCache cache;
  const auto gz = make(Backend::gzip);
  std::vector<std::string> seqs;
  std::mt19937_64 gen(9);
  for (int i = 0; i < 64; ++i) seqs.push_back(oracle::random_symbols(gen, 30, 22));
  std::vector<std::size_t> expected;
  for (const auto& s : seqs) expected.push_back(gz.compressed_length(s));
  std::atomic<int> mismatches{0};
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int r = 0; r < 20; ++r) {
          for (std::size_t i = 0; i < seqs.size(); ++i) {
            const auto j = (i + static_cast<std::size_t>(t) * 7) % seqs.size();
            if (cache.length(gz, seqs[j]) != expected[j]) ++mismatches;
          }
        }
      });
    }
  }
  EXPECT_EQ(mismatches.load(), 0);
  EXPECT_EQ(cache.size(), seqs.size());
}

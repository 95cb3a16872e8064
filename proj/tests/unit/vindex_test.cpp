#include "oracles.hpp"

#include "skillmap/error.hpp"
#include "skillmap/vindex.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace skillmap;

namespace {

EmbeddingVector unit(std::vector<float> v) { return normalize(std::span<const float>(v)); }

CatalogEntry entry(std::string id, std::vector<float> v) { return {id, "label " + id, unit(std::move(v))}; }

template <typename F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no skillmap::Error thrown";
  return ErrorCode::InvalidArgument;
}

VectorIndex random_index(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::vector<CatalogEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    auto v = oracle::random_unit(rng, dim);
    entries.push_back({"id" + std::to_string(rng() % 1000000) + "_" + std::to_string(i), "",
                       normalize(std::span<const float>(v))});
  }
  return build_index(std::move(entries));
}

}  // namespace

TEST(Cosine, Examples) {
  const auto a = unit({1, 0}), b = unit({0, 1});
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
  const std::vector<float> p{0.6f, 0.8f}, q{0.8f, 0.6f};
  EXPECT_NEAR(cosine_similarity(p, q), 0.96, 1e-7);
  EXPECT_EQ(code_of([&] { (void)cosine_similarity(a, unit({1, 0, 0})); }), ErrorCode::DimensionMismatch);
}

TEST(Cosine, SymmetricAndInRange) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto a = oracle::random_unit(rng, 1 + rng() % 64);
    const auto b = oracle::random_unit(rng, a.size());
    const double ab = cosine_similarity(a, b);
    EXPECT_NEAR(ab, cosine_similarity(b, a), 1e-7);
    EXPECT_LE(std::abs(ab), 1.0);
  }
  const std::vector<float> big{1.0000001f};
  EXPECT_LE(cosine_similarity(big, big), 1.0);
}

TEST(BuildIndex, EchoAndErrors) {
  std::mt19937_64 rng(4);
  const auto idx = random_index(rng, 200, 256);
  EXPECT_EQ(idx.size(), 200u);
  EXPECT_EQ(idx.dim(), 256u);

  std::vector<CatalogEntry> dup{entry("S1", {1, 0}), entry("S1", {0, 1})};
  EXPECT_EQ(code_of([&] { (void)build_index(dup); }), ErrorCode::DuplicateId);
  std::vector<CatalogEntry> mixed{entry("a", {1, 0}), entry("b", {0, 0, 1})};
  EXPECT_EQ(code_of([&] { (void)build_index(mixed); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { (void)build_index({}); }), ErrorCode::EmptyCatalog);
}

TEST(BuildIndex, KeepsInsertionOrder) {
  const auto idx = build_index({entry("z", {1, 0}), entry("a", {0, 1}), entry("m", {1, 1})});
  EXPECT_EQ(idx.id(0), "z");
  EXPECT_EQ(idx.id(2), "m");
  EXPECT_EQ(idx.position("a"), 1u);
  EXPECT_FALSE(idx.position("q").has_value());
}

TEST(SearchTopk, Examples) {
  const auto idx = build_index({entry("u1", {1, 0}), entry("u2", {0, 1})});
  const std::vector<float> q{0.8f, 0.6f};
  const auto hits = search_topk(idx, q, 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].id, "u1");
  EXPECT_NEAR(hits[0].score, 0.8, 1e-7);
  EXPECT_EQ(hits[1].id, "u2");
  EXPECT_NEAR(hits[1].score, 0.6, 1e-7);
  EXPECT_EQ(hits[1].rank, 1u);
  EXPECT_EQ(search_topk(idx, q, 10).size(), 2u);
}

TEST(SearchTopk, TieBreaksOnId) {
  const auto idx = build_index({entry("b", {1, 1}), entry("a", {1, 1}), entry("c", {0, 1})});
  const std::vector<float> q{1, 0};
  const auto hits = search_topk(idx, q, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].id, "a");
}

TEST(SearchTopk, Errors) {
  const auto idx = build_index({entry("a", {1, 0})});
  const std::vector<float> q{1, 0}, q3{1, 0, 0};
  EXPECT_EQ(code_of([&] { (void)search_topk(idx, q, 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { (void)search_topk(idx, q3, 1); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { (void)search_threshold(idx, q3, 0.0); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { (void)search_threshold(idx, q, 1.5); }), ErrorCode::InvalidArgument);
}

TEST(SearchThreshold, StrictInequality) {
  auto at = [](double c) { return std::vector<float>{static_cast<float>(c), static_cast<float>(std::sqrt(1 - c * c))}; };
  const auto idx = build_index({entry("s80", at(0.8)), entry("s60", at(0.6)), entry("s35", at(0.35)),
                                entry("s10", at(0.1))});
  const std::vector<float> q{1, 0};
  const auto all = search_topk(idx, q, 4);
  const double exact = all[2].score;
  ASSERT_EQ(all[2].id, "s35");
  const auto hits = search_threshold(idx, q, exact);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].id, "s80");
  EXPECT_EQ(hits[1].id, "s60");
  EXPECT_EQ(search_threshold(idx, q, -1.0).size(), 4u);
}

TEST(SearchThreshold, SelfMatchNotAboveOne) {
  const auto idx = build_index({entry("a", {1, 0}), entry("b", {0, 1})});
  const std::vector<float> q{1, 0};
  EXPECT_TRUE(search_threshold(idx, q, 1.0).empty());
}

TEST(SearchTopk, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 300;
    const std::size_t dim = 1 + rng() % 96;
    const auto idx = random_index(rng, n, dim);
    for (int qi = 0; qi < 5; ++qi) {
      const auto q = oracle::random_unit(rng, dim);
      const std::size_t k = 1 + rng() % (n + 5);
      const auto got = search_topk(idx, q, k);
      const auto want = oracle::topk(idx, q, k);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].id, want[i].id);
        EXPECT_NEAR(got[i].score, want[i].score, 1e-6);
        EXPECT_EQ(got[i].rank, i);
      }
      // threshold search is the prefix of the full ranking above tau
      const double tau = std::uniform_real_distribution<double>(-1, 1)(rng);
      const auto full = search_topk(idx, q, n);
      std::vector<SearchHit> prefix;
      for (const auto& h : full) {
        if (h.score > tau) prefix.push_back(h);
      }
      EXPECT_EQ(search_threshold(idx, q, tau), prefix);
    }
  }
}

TEST(Persistence, RoundTripIsBitIdentical) {
  std::mt19937_64 rng(8);
  const auto idx = random_index(rng, 300, 48);
  const auto path = std::filesystem::temp_directory_path() / "skillmap_test_index.vidx";
  save_index(idx, path);
  const auto back = load_index(path);
  ASSERT_EQ(back.size(), idx.size());
  ASSERT_EQ(back.data(), idx.data());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    EXPECT_EQ(back.id(i), idx.id(i));
    EXPECT_EQ(back.label(i), idx.label(i));
  }
  for (int i = 0; i < 200; ++i) {
    const auto q = oracle::random_unit(rng, 48);
    EXPECT_EQ(search_topk(back, q, 10), search_topk(idx, q, 10));
  }
}

TEST(Persistence, LabelsWithUnicodeAndQuotes) {
  const auto idx = build_index({{"S\"1", "caf\xC3\xA9 \"quoted\"\n", unit({1, 2})}});
  const auto back = deserialize_index(serialize_index(idx));
  EXPECT_EQ(back.id(0), "S\"1");
  EXPECT_EQ(back.label(0), "caf\xC3\xA9 \"quoted\"\n");
}

TEST(Persistence, CorruptionIsDetected) {
  std::mt19937_64 rng(12);
  const std::string bytes = serialize_index(random_index(rng, 20, 8));

  std::string flipped = bytes;
  flipped[40] = static_cast<char>(flipped[40] ^ 0x01);
  EXPECT_EQ(code_of([&] { (void)deserialize_index(flipped); }), ErrorCode::ChecksumError);

  std::string meta_flip = bytes;
  meta_flip[bytes.size() - 10] = static_cast<char>(meta_flip[bytes.size() - 10] ^ 0x20);
  EXPECT_EQ(code_of([&] { (void)deserialize_index(meta_flip); }), ErrorCode::ChecksumError);

  EXPECT_EQ(code_of([&] { (void)deserialize_index(bytes.substr(0, bytes.size() - 7)); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([&] { (void)deserialize_index(bytes.substr(0, 10)); }), ErrorCode::FormatError);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_EQ(code_of([&] { (void)deserialize_index(magic); }), ErrorCode::FormatError);
  std::string version = bytes;
  version[4] = 2;
  EXPECT_EQ(code_of([&] { (void)deserialize_index(version); }), ErrorCode::FormatError);
}

TEST(Persistence, LayoutHeader) {
  const auto idx = build_index({entry("a", {1, 0, 0}), entry("b", {0, 1, 0})});
  const std::string b = serialize_index(idx);
  EXPECT_EQ(b.substr(0, 4), "VIDX");
  auto u32 = [&](std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24;
  };
  EXPECT_EQ(u32(4), 1u);
  EXPECT_EQ(u32(8), 3u);
  EXPECT_EQ(u32(12), 2u);  // low half of the u64 count
  const std::size_t meta_len_at = 4 + 4 + 4 + 8 + 2 * 3 * 4;
  const std::size_t meta_len = u32(meta_len_at);
  EXPECT_EQ(b.substr(meta_len_at + 8, meta_len), R"([{"id":"a","label":"label a"},{"id":"b","label":"label b"}])");
  EXPECT_EQ(b.size(), meta_len_at + 8 + meta_len + 4);
}

TEST(Persistence, IoErrors) {
  const auto idx = build_index({entry("a", {1, 0})});
  EXPECT_EQ(code_of([&] { save_index(idx, "/nonexistent-dir/x.vidx"); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([] { (void)load_index("/nonexistent-dir/x.vidx"); }), ErrorCode::IoError);
}

#pragma once

#include "skillmap/lru_cache.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmap {

// A unit-length float vector. Only produced by normalize() or by components
// that call it, so holders may assume ||values|| == 1 within 1e-6.
struct EmbeddingVector {
  std::vector<float> values;

  [[nodiscard]] std::size_t dim() const noexcept { return values.size(); }
  [[nodiscard]] std::span<const float> span() const noexcept { return values; }
  bool operator==(const EmbeddingVector&) const = default;
};

EmbeddingVector normalize(std::span<const float> raw);
EmbeddingVector normalize(std::span<const double> raw);

[[nodiscard]] double l2_norm(std::span<const float> v) noexcept;

enum class EmbedderKind { hashed_ngram, precomputed };

[[nodiscard]] std::string_view to_string(EmbedderKind kind) noexcept;
[[nodiscard]] std::optional<EmbedderKind> parse_embedder_kind(std::string_view name);

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::hashed_ngram;
  std::size_t dim = 256;
  std::uint64_t seed = 42;
  std::size_t cache_capacity = 4096;

  void validate() const;
};

class Embedder {
 public:
  virtual ~Embedder() = default;

  [[nodiscard]] virtual std::size_t dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) const = 0;

  // Catalog items carry a stable key (their id). The default ignores it;
  // the precomputed embedder looks the key up before falling back to text.
  virtual EmbeddingVector embed_item(std::string_view key, std::string_view text) const {
    (void)key;
    return embed(text);
  }

  // A vector stored under `key`, if this embedder keeps any.
  [[nodiscard]] virtual std::optional<EmbeddingVector> lookup_item(std::string_view key) const {
    (void)key;
    return std::nullopt;
  }
};

// Signed feature hashing over lowercased unigrams and adjacent bigrams.
class HashedNgramEmbedder final : public Embedder {
 public:
  HashedNgramEmbedder(std::size_t dim, std::uint64_t seed);

  [[nodiscard]] std::size_t dim() const override { return dim_; }
  EmbeddingVector embed(std::string_view text) const override;

  // Salted FNV-1a: the seed's 8 little-endian bytes are mixed in before the token.
  [[nodiscard]] static std::uint64_t hash_token(std::string_view token, std::uint64_t seed) noexcept;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }
  [[nodiscard]] const std::vector<std::string>& keys() const noexcept { return keys_; }

  // Normalizes on insert. Re-inserting a key replaces its vector.
  void insert(std::string key, std::span<const float> raw);
  [[nodiscard]] const EmbeddingVector* find(std::string_view key) const;

 private:
  std::size_t dim_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, EmbeddingVector> vectors_;
};

EmbeddingStore load_embedding_store(const std::filesystem::path& path);
void save_embedding_store(const EmbeddingStore& store, const std::filesystem::path& path);

class PrecomputedEmbedder final : public Embedder {
 public:
  explicit PrecomputedEmbedder(std::shared_ptr<const EmbeddingStore> store);

  [[nodiscard]] std::size_t dim() const override { return store_->dim(); }
  EmbeddingVector embed(std::string_view text) const override;
  EmbeddingVector embed_item(std::string_view key, std::string_view text) const override;
  [[nodiscard]] std::optional<EmbeddingVector> lookup_item(std::string_view key) const override;

 private:
  std::shared_ptr<const EmbeddingStore> store_;
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::size_t size = 0;
  std::size_t capacity = 0;
};

// LRU memoization of embed(). embed_item() is passed through uncached.
class CachedEmbedder final : public Embedder {
 public:
  CachedEmbedder(std::shared_ptr<const Embedder> inner, std::size_t capacity);

  [[nodiscard]] std::size_t dim() const override { return inner_->dim(); }
  EmbeddingVector embed(std::string_view text) const override;
  EmbeddingVector embed_item(std::string_view key, std::string_view text) const override;
  [[nodiscard]] std::optional<EmbeddingVector> lookup_item(std::string_view key) const override {
    return inner_->lookup_item(key);
  }

  [[nodiscard]] CacheStats stats() const;
  [[nodiscard]] std::vector<std::string> cached_keys() const;
  void clear();

 private:
  std::shared_ptr<const Embedder> inner_;
  mutable std::mutex mu_;
  mutable LruCache<EmbeddingVector> cache_;
  mutable std::uint64_t hits_ = 0;
  mutable std::uint64_t misses_ = 0;
};

// Builds the configured embedder wrapped in an LRU cache. `store` is required
// for the precomputed kind, whose dimension then comes from the store.
std::shared_ptr<CachedEmbedder> make_embedder(const EmbedderSpec& spec,
                                              std::shared_ptr<const EmbeddingStore> store = {});

}  // namespace skillmap

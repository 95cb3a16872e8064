#include "skillmap/embedding.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace skillmap {

namespace {

template <typename T>
EmbeddingVector normalize_impl(std::span<const T> raw) {
  if (raw.empty()) throw Error(ErrorCode::ZeroVector, "cannot normalize an empty vector");
  double sq = 0.0;
  for (T x : raw) {
    if (!std::isfinite(static_cast<double>(x))) {
      throw Error(ErrorCode::NonFinite, "vector has a non-finite component");
    }
    sq += static_cast<double>(x) * static_cast<double>(x);
  }
  if (sq == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw Error(ErrorCode::NonFinite, "vector norm overflows");
  EmbeddingVector out;
  out.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.values[i] = static_cast<float>(static_cast<double>(raw[i]) / norm);
  }
  return out;
}

}  // namespace

EmbeddingVector normalize(std::span<const float> raw) { return normalize_impl(raw); }
EmbeddingVector normalize(std::span<const double> raw) { return normalize_impl(raw); }

double l2_norm(std::span<const float> v) noexcept {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(sq);
}

std::string_view to_string(EmbedderKind kind) noexcept {
  return kind == EmbedderKind::precomputed ? "precomputed" : "hashed_ngram";
}

std::optional<EmbedderKind> parse_embedder_kind(std::string_view name) {
  if (name == "hashed_ngram") return EmbedderKind::hashed_ngram;
  if (name == "precomputed") return EmbedderKind::precomputed;
  return std::nullopt;
}

void EmbedderSpec::validate() const {
  if (dim < 8) throw Error(ErrorCode::ConfigError, "embedding.dim must be >= 8");
  if (cache_capacity < 1) throw Error(ErrorCode::ConfigError, "embedding.cache_capacity must be >= 1");
}

// ---------------------------------------------------------------------------

HashedNgramEmbedder::HashedNgramEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim < 8) throw Error(ErrorCode::InvalidArgument, "embedding dim must be >= 8");
}

std::uint64_t HashedNgramEmbedder::hash_token(std::string_view token, std::uint64_t seed) noexcept {
  constexpr std::uint64_t kOffset = 14695981039346656037ull;
  constexpr std::uint64_t kPrime = 1099511628211ull;
  std::uint64_t h = kOffset;
  for (int i = 0; i < 8; ++i) {
    h ^= (seed >> (8 * i)) & 0xFFu;
    h *= kPrime;
  }
  for (char c : token) {
    h ^= static_cast<unsigned char>(c);
    h *= kPrime;
  }
  return h;
}

EmbeddingVector HashedNgramEmbedder::embed(std::string_view text) const {
  const std::vector<std::string> tokens = text::word_tokens(text);
  if (tokens.empty()) throw Error(ErrorCode::EmptyInput, "text has no tokens to embed");

  std::vector<double> signed_acc(dim_, 0.0);
  std::vector<double> unsigned_acc(dim_, 0.0);
  auto add = [&](std::string_view feature) {
    const std::uint64_t h = hash_token(feature, seed_);
    const std::size_t bucket = static_cast<std::size_t>(h % dim_);
    signed_acc[bucket] += (h >> 63) ? -1.0 : 1.0;
    unsigned_acc[bucket] += 1.0;
  };
  std::string bigram;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (i + 1 < tokens.size()) {
      bigram.assign(tokens[i]).append(" ").append(tokens[i + 1]);
      add(bigram);
    }
  }
  for (double x : signed_acc) {
    if (x != 0.0) return normalize(std::span<const double>(signed_acc));
  }
  // Every bucket cancelled out; the unsigned counts still carry the text's identity.
  return normalize(std::span<const double>(unsigned_acc));
}

// ---------------------------------------------------------------------------

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding store dim must be > 0");
}

void EmbeddingStore::insert(std::string key, std::span<const float> raw) {
  if (raw.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "vector for '" + key + "' has " +
                                                  std::to_string(raw.size()) + " components, store dim is " +
                                                  std::to_string(dim_));
  }
  EmbeddingVector v = normalize(raw);
  auto [it, inserted] = vectors_.try_emplace(key, std::move(v));
  if (!inserted) {
    it->second = normalize(raw);
  } else {
    keys_.push_back(std::move(key));
  }
}

const EmbeddingVector* EmbeddingStore::find(std::string_view key) const {
  auto it = vectors_.find(std::string(key));
  return it == vectors_.end() ? nullptr : &it->second;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());
  return ss.str();
}

[[noreturn]] void store_format_error(const std::filesystem::path& path, std::size_t row,
                                     const std::string& what) {
  throw Error(ErrorCode::FormatError,
              path.string() + ": row " + std::to_string(row) + ": " + what);
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EmbeddingStore load_embedding_store(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  const std::string_view all = data;
  std::size_t eol = all.find('\n');
  const std::string_view header = text::trim(all.substr(0, eol));

  const auto fields = text::split_whitespace(header);
  if (fields.size() != 4 || fields[0] != "EMBSTORE" || fields[1] != "v1" ||
      !fields[2].starts_with("dim=") || !fields[3].starts_with("count=")) {
    throw Error(ErrorCode::FormatError, path.string() + ": bad header '" + std::string(header) + "'");
  }
  std::size_t dim = 0;
  std::size_t count = 0;
  if (!parse_uint(fields[2].substr(4), dim) || dim == 0 || !parse_uint(fields[3].substr(6), count)) {
    throw Error(ErrorCode::FormatError, path.string() + ": bad header '" + std::string(header) + "'");
  }

  EmbeddingStore store(dim);
  std::size_t pos = eol == std::string_view::npos ? all.size() : eol + 1;
  std::vector<float> row_values;
  for (std::size_t row = 1; row <= count; ++row) {
    if (pos >= all.size()) store_format_error(path, row, "missing row (header declares " + std::to_string(count) + ")");
    const std::size_t colon = all.find(':', pos);
    std::size_t key_len = 0;
    if (colon == std::string_view::npos || !parse_uint(all.substr(pos, colon - pos), key_len)) {
      store_format_error(path, row, "expected <length>:<key>");
    }
    const std::size_t key_start = colon + 1;
    if (key_start + key_len >= all.size() || all[key_start + key_len] != '\t') {
      store_format_error(path, row, "key length does not match, or tab separator missing");
    }
    std::string key(all.substr(key_start, key_len));
    if (store.find(key) != nullptr) store_format_error(path, row, "duplicate key '" + key + "'");

    std::size_t line_end = all.find('\n', key_start + key_len + 1);
    if (line_end == std::string_view::npos) line_end = all.size();
    const std::string_view floats = all.substr(key_start + key_len + 1, line_end - key_start - key_len - 1);
    row_values.clear();
    for (std::string_view tok : text::split_whitespace(floats)) {
      float x = 0.0f;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        store_format_error(path, row, "bad float '" + std::string(tok) + "'");
      }
      row_values.push_back(x);
    }
    if (row_values.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  path.string() + ": row " + std::to_string(row) + " has " +
                      std::to_string(row_values.size()) + " components, header says dim=" +
                      std::to_string(dim));
    }
    store.insert(std::move(key), row_values);
    pos = line_end + 1;
  }
  if (pos < all.size() && !text::trim(all.substr(pos)).empty()) {
    throw Error(ErrorCode::FormatError, path.string() + ": more rows than header count " +
                                            std::to_string(count));
  }
  return store;
}

void save_embedding_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  std::string out = "EMBSTORE v1 dim=" + std::to_string(store.dim()) +
                    " count=" + std::to_string(store.size()) + "\n";
  char buf[64];
  for (const std::string& key : store.keys()) {
    out += std::to_string(key.size());
    out += ':';
    out += key;
    out += '\t';
    const EmbeddingVector* v = store.find(key);
    for (std::size_t i = 0; i < v->dim(); ++i) {
      if (i) out += ' ';
      const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v->values[i]);
      out.append(buf, p);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------

PrecomputedEmbedder::PrecomputedEmbedder(std::shared_ptr<const EmbeddingStore> store)
    : store_(std::move(store)) {
  if (!store_) throw Error(ErrorCode::InvalidArgument, "precomputed embedder needs a store");
}

EmbeddingVector PrecomputedEmbedder::embed(std::string_view text) const {
  if (text::word_tokens(text).empty()) throw Error(ErrorCode::EmptyInput, "text has no tokens to embed");
  if (const EmbeddingVector* v = store_->find(text)) return *v;
  const std::string preview(text.substr(0, 60));
  throw Error(ErrorCode::MissingEmbedding, "no precomputed embedding for '" + preview + "'");
}

EmbeddingVector PrecomputedEmbedder::embed_item(std::string_view key, std::string_view text) const {
  if (const EmbeddingVector* v = store_->find(key)) return *v;
  if (const EmbeddingVector* v = store_->find(text)) return *v;
  throw Error(ErrorCode::MissingEmbedding, "no precomputed embedding for item '" + std::string(key) + "'");
}

std::optional<EmbeddingVector> PrecomputedEmbedder::lookup_item(std::string_view key) const {
  if (const EmbeddingVector* v = store_->find(key)) return *v;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

CachedEmbedder::CachedEmbedder(std::shared_ptr<const Embedder> inner, std::size_t capacity)
    : inner_(std::move(inner)), cache_(capacity) {
  if (!inner_) throw Error(ErrorCode::InvalidArgument, "cached embedder needs an inner embedder");
  if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "cache capacity must be >= 1");
}

EmbeddingVector CachedEmbedder::embed(std::string_view text) const {
  std::string key(text);
  {
    std::lock_guard lock(mu_);
    if (auto hit = cache_.get(key)) {
      ++hits_;
      return std::move(*hit);
    }
    ++misses_;
  }
  // Computed outside the lock; a concurrent miss on the same key just
  // recomputes the identical vector.
  EmbeddingVector v = inner_->embed(text);
  std::lock_guard lock(mu_);
  cache_.put(std::move(key), v);
  return v;
}

EmbeddingVector CachedEmbedder::embed_item(std::string_view key, std::string_view text) const {
  return inner_->embed_item(key, text);
}

CacheStats CachedEmbedder::stats() const {
  std::lock_guard lock(mu_);
  return {hits_, misses_, cache_.size(), cache_.capacity()};
}

std::vector<std::string> CachedEmbedder::cached_keys() const {
  std::lock_guard lock(mu_);
  return cache_.keys();
}

void CachedEmbedder::clear() {
  std::lock_guard lock(mu_);
  cache_.clear();
  hits_ = 0;
  misses_ = 0;
}

std::shared_ptr<CachedEmbedder> make_embedder(const EmbedderSpec& spec,
                                              std::shared_ptr<const EmbeddingStore> store) {
  spec.validate();
  std::shared_ptr<const Embedder> inner;
  if (spec.kind == EmbedderKind::precomputed) {
    if (!store) throw Error(ErrorCode::ConfigError, "embedding.kind = precomputed requires an embeddings store");
    inner = std::make_shared<PrecomputedEmbedder>(std::move(store));
  } else {
    inner = std::make_shared<HashedNgramEmbedder>(spec.dim, spec.seed);
  }
  return std::make_shared<CachedEmbedder>(std::move(inner), spec.cache_capacity);
}

}  // namespace skillmap

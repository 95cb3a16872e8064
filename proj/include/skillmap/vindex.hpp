#pragma once

#include "skillmap/embedding.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmap {

struct CatalogEntry {
  std::string id;
  std::string label;
  EmbeddingVector vector;
};

struct SearchHit {
  std::string id;
  double score = 0.0;
  std::size_t rank = 0;

  bool operator==(const SearchHit&) const = default;
};

// Exact inner-product index. Immutable once built; searches are const and
// safe to run concurrently.
class VectorIndex {
 public:
  VectorIndex() = default;

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
  [[nodiscard]] bool empty() const noexcept { return ids_.empty(); }

  [[nodiscard]] const std::string& id(std::size_t pos) const { return ids_.at(pos); }
  [[nodiscard]] const std::string& label(std::size_t pos) const { return labels_.at(pos); }
  [[nodiscard]] std::span<const float> vector(std::size_t pos) const;
  [[nodiscard]] std::optional<std::size_t> position(std::string_view id) const;

  // Row-major float storage, size() * dim() values.
  [[nodiscard]] const std::vector<float>& data() const noexcept { return data_; }

 private:
  friend VectorIndex build_index(std::vector<CatalogEntry> entries);
  friend VectorIndex deserialize_index(std::string_view bytes, const std::string& source);

  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> positions_;
};

// Sum of products in double, clamped to [-1, 1].
double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

VectorIndex build_index(std::vector<CatalogEntry> entries);

// Hits ordered by score descending, then id ascending; rank is the position.
std::vector<SearchHit> search_topk(const VectorIndex& index, std::span<const float> query,
                                   std::size_t k);
// Every entry whose score is strictly greater than tau.
std::vector<SearchHit> search_threshold(const VectorIndex& index, std::span<const float> query,
                                        double tau);

void save_index(const VectorIndex& index, const std::filesystem::path& path);
VectorIndex load_index(const std::filesystem::path& path);

// The serialized bytes save_index writes, exposed for in-memory round trips.
std::string serialize_index(const VectorIndex& index);
VectorIndex deserialize_index(std::string_view bytes, const std::string& source = "<memory>");

}  // namespace skillmap

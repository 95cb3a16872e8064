#include "skillmap/vindex.hpp"

#include "skillmap/error.hpp"

#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace skillmap {

std::span<const float> VectorIndex::vector(std::size_t pos) const {
  if (pos >= ids_.size()) throw Error(ErrorCode::InvalidArgument, "index position out of range");
  return std::span<const float>(data_).subspan(pos * dim_, dim_);
}

std::optional<std::size_t> VectorIndex::position(std::string_view id) const {
  auto it = positions_.find(std::string(id));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "cosine_similarity: dims " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return std::clamp(s, -1.0, 1.0);
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  return cosine_similarity(a.span(), b.span());
}

VectorIndex build_index(std::vector<CatalogEntry> entries) {
  if (entries.empty()) throw Error(ErrorCode::EmptyCatalog, "cannot build an index from zero entries");
  VectorIndex index;
  index.dim_ = entries.front().vector.dim();
  if (index.dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "entry '" + entries.front().id + "' has dim 0");
  index.data_.reserve(entries.size() * index.dim_);
  index.ids_.reserve(entries.size());
  index.labels_.reserve(entries.size());
  for (CatalogEntry& e : entries) {
    if (e.vector.dim() != index.dim_) {
      throw Error(ErrorCode::DimensionMismatch, "entry '" + e.id + "' has dim " +
                                                    std::to_string(e.vector.dim()) + ", expected " +
                                                    std::to_string(index.dim_));
    }
    if (!index.positions_.emplace(e.id, index.ids_.size()).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + e.id + "'");
    }
    index.data_.insert(index.data_.end(), e.vector.values.begin(), e.vector.values.end());
    index.ids_.push_back(std::move(e.id));
    index.labels_.push_back(std::move(e.label));
  }
  return index;
}

namespace {

void check_query(const VectorIndex& index, std::span<const float> query) {
  if (query.size() != index.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query dim " + std::to_string(query.size()) +
                                                  " does not match index dim " +
                                                  std::to_string(index.dim()));
  }
}

struct Scored {
  double score;
  std::size_t pos;
};

std::vector<Scored> score_all(const VectorIndex& index, std::span<const float> query) {
  std::vector<Scored> out(index.size());
  const float* row = index.data().data();
  const std::size_t d = index.dim();
  for (std::size_t i = 0; i < index.size(); ++i, row += d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += static_cast<double>(row[k]) * static_cast<double>(query[k]);
    out[i] = {std::clamp(s, -1.0, 1.0), i};
  }
  return out;
}

std::vector<SearchHit> to_hits(const VectorIndex& index, const std::vector<Scored>& sorted,
                               std::size_t n) {
  std::vector<SearchHit> hits;
  hits.reserve(n);
  for (std::size_t r = 0; r < n; ++r) hits.push_back({index.id(sorted[r].pos), sorted[r].score, r});
  return hits;
}

}  // namespace

std::vector<SearchHit> search_topk(const VectorIndex& index, std::span<const float> query,
                                   std::size_t k) {
  check_query(index, query);
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::vector<Scored> scored = score_all(index, query);
  const auto better = [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return index.id(a.pos) < index.id(b.pos);
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);
  return to_hits(index, scored, n);
}

std::vector<SearchHit> search_threshold(const VectorIndex& index, std::span<const float> query,
                                        double tau) {
  check_query(index, query);
  if (!(tau >= -1.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must be in [-1, 1]");
  std::vector<Scored> scored = score_all(index, query);
  std::erase_if(scored, [tau](const Scored& s) { return !(s.score > tau); });
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return index.id(a.pos) < index.id(b.pos);
  });
  return to_hits(index, scored, scored.size());
}

// --- persistence ------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'V', 'I', 'D', 'X'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in slices for very large inputs.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

[[noreturn]] void format_error(const std::string& source, const std::string& what) {
  throw Error(ErrorCode::FormatError, source + ": " + what);
}

}  // namespace

std::string serialize_index(const VectorIndex& index) {
  std::string out;
  out.reserve(kHeaderBytes + index.data().size() * 4 + 64 * index.size() + 12);
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(index.dim()));
  put_le<std::uint64_t>(out, index.size());
  for (float f : index.data()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));

  nlohmann::ordered_json meta = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < index.size(); ++i) {
    meta.push_back({{"id", index.id(i)}, {"label", index.label(i)}});
  }
  const std::string meta_text = meta.dump();
  put_le<std::uint64_t>(out, meta_text.size());
  out += meta_text;
  put_le<std::uint32_t>(out, crc32_of(out));
  return out;
}

VectorIndex deserialize_index(std::string_view bytes, const std::string& source) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    format_error(source, "not a VIDX index file");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kVersion) format_error(source, "unsupported version " + std::to_string(version));
  const auto dim = get_le<std::uint32_t>(bytes, 8);
  const auto count = get_le<std::uint64_t>(bytes, 12);
  if (dim == 0) format_error(source, "dim is 0");

  // Size checks come before the checksum so truncation reads as a format problem.
  const std::uint64_t max_rows = (bytes.size() - kHeaderBytes) / (4ull * dim);
  if (count > max_rows) format_error(source, "file truncated inside vector block");
  const std::size_t vec_bytes = static_cast<std::size_t>(count) * dim * 4;
  const std::size_t meta_len_at = kHeaderBytes + vec_bytes;
  if (bytes.size() < meta_len_at + 8 + 4) format_error(source, "file truncated before metadata");
  const auto meta_len = get_le<std::uint64_t>(bytes, meta_len_at);
  if (meta_len != bytes.size() - meta_len_at - 8 - 4) {
    format_error(source, "metadata length does not match file size");
  }
  const std::size_t crc_at = bytes.size() - 4;
  const auto stored_crc = get_le<std::uint32_t>(bytes, crc_at);
  if (crc32_of(bytes.substr(0, crc_at)) != stored_crc) {
    throw Error(ErrorCode::ChecksumError, source + ": CRC32 mismatch");
  }

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(bytes.substr(meta_len_at + 8, static_cast<std::size_t>(meta_len)));
  } catch (const nlohmann::json::exception& e) {
    format_error(source, std::string("metadata is not valid JSON: ") + e.what());
  }
  if (!meta.is_array() || meta.size() != count) format_error(source, "metadata row count mismatch");

  VectorIndex index;
  index.dim_ = dim;
  index.data_.resize(static_cast<std::size_t>(count) * dim);
  for (std::size_t i = 0; i < index.data_.size(); ++i) {
    index.data_[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, kHeaderBytes + 4 * i));
  }
  index.ids_.reserve(count);
  index.labels_.reserve(count);
  for (const auto& row : meta) {
    if (!row.is_object() || !row.contains("id") || !row["id"].is_string() ||
        !row.contains("label") || !row["label"].is_string()) {
      format_error(source, "metadata row must be {id, label}");
    }
    std::string id = row["id"].get<std::string>();
    if (!index.positions_.emplace(id, index.ids_.size()).second) {
      format_error(source, "duplicate id '" + id + "'");
    }
    index.ids_.push_back(std::move(id));
    index.labels_.push_back(row["label"].get<std::string>());
  }
  return index;
}

void save_index(const VectorIndex& index, const std::filesystem::path& path) {
  const std::string bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

VectorIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed for " + path.string());
  return deserialize_index(ss.str(), path.string());
}

}  // namespace skillmap

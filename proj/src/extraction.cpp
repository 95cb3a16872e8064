#include "skillmap/extraction.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

namespace skillmap {

void ExtractionConfig::validate() const {
  if (!(tau >= -1.0 && tau <= 1.0)) throw Error(ErrorCode::ConfigError, "extraction.tau must be in [-1, 1]");
  if (!(dedup_similarity >= 0.0 && dedup_similarity <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "extraction.dedup_similarity must be in [0, 1]");
  }
  if (chunk_size_limit < kMinChunkSizeLimit) {
    throw Error(ErrorCode::ConfigError,
                "extraction.chunk_size_limit must be >= " + std::to_string(kMinChunkSizeLimit));
  }
  if (max_skills < 1) throw Error(ErrorCode::ConfigError, "extraction.max_skills must be >= 1");
  if (workers < 1) throw Error(ErrorCode::ConfigError, "extraction.workers must be >= 1");
}

bool match_order(const SkillMatch& a, const SkillMatch& b) noexcept {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  if (a.max_score != b.max_score) return a.max_score > b.max_score;
  return a.skill_id < b.skill_id;
}

std::vector<SearchHit> match_chunk(const Chunk& chunk, const VectorIndex& index,
                                   const ExtractionConfig& config, const Embedder& embedder) {
  if (chunk.text.empty()) throw Error(ErrorCode::EmptyDocument, "chunk " + std::to_string(chunk.index) + " is empty");
  const EmbeddingVector v = embedder.embed(chunk.text);
  return search_threshold(index, v.span(), config.tau);
}

std::vector<SkillMatch> aggregate_frequencies(const std::vector<std::vector<SearchHit>>& per_chunk_hits,
                                              const VectorIndex* index) {
  struct Acc {
    std::size_t count = 0;
    double max = 0.0;
    double sum = 0.0;
    double chunk_score = 0.0;
    std::size_t last_chunk = static_cast<std::size_t>(-1);
  };
  std::map<std::string, Acc> acc;
  for (std::size_t c = 0; c < per_chunk_hits.size(); ++c) {
    for (const SearchHit& h : per_chunk_hits[c]) {
      Acc& a = acc[h.id];
      if (a.last_chunk == c) {  // indicator: one vote per chunk, at its best score
        if (h.score > a.chunk_score) {
          a.sum += h.score - a.chunk_score;
          a.chunk_score = h.score;
          a.max = std::max(a.max, h.score);
        }
        continue;
      }
      a.last_chunk = c;
      a.chunk_score = h.score;
      a.max = a.count == 0 ? h.score : std::max(a.max, h.score);
      a.sum += h.score;
      ++a.count;
    }
  }
  std::vector<SkillMatch> out;
  out.reserve(acc.size());
  for (const auto& [id, a] : acc) {
    SkillMatch m;
    m.skill_id = id;
    if (index) {
      if (auto pos = index->position(id)) m.label = index->label(*pos);
    }
    m.frequency = a.count;
    m.max_score = a.max;
    m.mean_score = a.sum / static_cast<double>(a.count);
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), match_order);
  return out;
}

double label_similarity(std::string_view a, std::string_view b) {
  const std::u32string ua = text::decode_utf8(text::to_lower(a));
  const std::u32string ub = text::decode_utf8(text::to_lower(b));
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(text::levenshtein(ua, ub)) / static_cast<double>(longest);
}

std::vector<SkillMatch> dedupe_matches(const std::vector<SkillMatch>& matches, double dedup_similarity,
                                       std::vector<DroppedMatch>* dropped) {
  std::vector<SkillMatch> kept;
  for (const SkillMatch& m : matches) {
    const SkillMatch* twin = nullptr;
    double sim = 0.0;
    for (const SkillMatch& k : kept) {
      sim = label_similarity(m.label, k.label);
      if (sim >= dedup_similarity) {
        twin = &k;
        break;
      }
    }
    if (twin) {
      if (dropped) dropped->push_back({m.skill_id, twin->skill_id, sim});
    } else {
      kept.push_back(m);
    }
  }
  return kept;
}

SkillProfile extract_skills_from_chunks(std::string document_name, const std::vector<Chunk>& chunks,
                                        const VectorIndex& index, const ExtractionConfig& config,
                                        const Embedder& embedder) {
  config.validate();
  if (chunks.empty()) throw Error(ErrorCode::EmptyDocument, "document '" + document_name + "' has no chunks");

  std::vector<std::vector<SearchHit>> hits(chunks.size());
  const std::size_t workers = std::min(config.workers, chunks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) hits[i] = match_chunk(chunks[i], index, config, embedder);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < chunks.size(); i = next++) {
          try {
            hits[i] = match_chunk(chunks[i], index, config, embedder);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  SkillProfile profile;
  profile.document_name = std::move(document_name);
  profile.chunk_count = chunks.size();
  profile.matches = dedupe_matches(aggregate_frequencies(hits, &index), config.dedup_similarity, &profile.dropped);
  if (profile.matches.size() > config.max_skills) profile.matches.resize(config.max_skills);
  return profile;
}

SkillProfile extract_skills(const RawDocument& doc, const PrepConfig& prep, const VectorIndex& index,
                            const ExtractionConfig& config, const Embedder& embedder) {
  PrepConfig effective = prep;
  effective.chunk_size_limit = config.chunk_size_limit;
  const PreparedDocument prepared = prepare_document(doc, effective);
  return extract_skills_from_chunks(doc.name, prepared.chunks, index, config, embedder);
}

}  // namespace skillmap

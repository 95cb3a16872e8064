#pragma once

#include "skillmap/embedding.hpp"
#include "skillmap/textprep.hpp"
#include "skillmap/vindex.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap {

struct ExtractionConfig {
  double tau = 0.35;
  std::size_t chunk_size_limit = kDefaultChunkSizeLimit;
  double dedup_similarity = 0.9;
  std::size_t max_skills = 50;
  std::size_t workers = 1;  // chunk-matching threads; output does not depend on it

  void validate() const;
};

struct SkillMatch {
  std::string skill_id;
  std::string label;
  std::size_t frequency = 0;  // chunks whose score is strictly above tau
  double max_score = 0.0;
  double mean_score = 0.0;    // over the matching chunks only
};

// A match removed as a near-duplicate of a higher-ranked one.
struct DroppedMatch {
  std::string skill_id;
  std::string kept_skill_id;
  double similarity = 0.0;
};

struct SkillProfile {
  std::string document_name;
  std::size_t chunk_count = 0;
  std::vector<SkillMatch> matches;
  std::vector<DroppedMatch> dropped;
};

// Frequency desc, max_score desc, skill_id asc.
[[nodiscard]] bool match_order(const SkillMatch& a, const SkillMatch& b) noexcept;

std::vector<SearchHit> match_chunk(const Chunk& chunk, const VectorIndex& index,
                                   const ExtractionConfig& config, const Embedder& embedder);

// One entry per skill seen in any hit list. A chunk counts at most once per
// skill. Labels come from `index` when given, otherwise they stay empty.
std::vector<SkillMatch> aggregate_frequencies(const std::vector<std::vector<SearchHit>>& per_chunk_hits,
                                              const VectorIndex* index = nullptr);

// 1 - levenshtein / max(length), over lowercased code points.
[[nodiscard]] double label_similarity(std::string_view a, std::string_view b);

// Expects `matches` in match_order. Keeps the first of any group of labels
// whose similarity reaches `dedup_similarity`.
std::vector<SkillMatch> dedupe_matches(const std::vector<SkillMatch>& matches, double dedup_similarity,
                                       std::vector<DroppedMatch>* dropped = nullptr);

SkillProfile extract_skills_from_chunks(std::string document_name, const std::vector<Chunk>& chunks,
                                        const VectorIndex& index, const ExtractionConfig& config,
                                        const Embedder& embedder);

// validate -> extract text -> clean -> chunk -> match -> aggregate -> dedupe -> truncate.
// The chunk size comes from `config`, overriding `prep.chunk_size_limit`.
SkillProfile extract_skills(const RawDocument& doc, const PrepConfig& prep, const VectorIndex& index,
                            const ExtractionConfig& config, const Embedder& embedder);

}  // namespace skillmap

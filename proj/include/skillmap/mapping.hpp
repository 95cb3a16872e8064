#pragma once

#include "skillmap/catalog.hpp"
#include "skillmap/embedding.hpp"
#include "skillmap/extraction.hpp"
#include "skillmap/textprep.hpp"
#include "skillmap/vindex.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace skillmap {

struct MappingConfig {
  double w_rho = 0.5;
  double w_sigma = 0.5;
  double tau_c = 0.35;
  std::size_t top_occupations = 10;
  std::size_t top_courses = 10;

  void validate() const;
};

struct OccupationScore {
  std::string occupation_id;
  std::string title;
  double overlap_ratio = 0.0;    // rho
  double text_similarity = 0.0;  // sigma
  double combined = 0.0;
  std::vector<std::string> matched_skill_ids;
};

struct CourseRecommendation {
  std::string course_id;
  std::string title;
  double score = 0.0;
  std::vector<std::string> matched_skill_ids;  // by similarity desc, then id
};

struct SdgScore {
  int sdg_id = 0;
  std::string name;
  double relevance = 0.0;
};

// |extracted ∩ required| / |required|.
[[nodiscard]] double overlap_ratio(const std::vector<std::string>& extracted_ids,
                                   const std::vector<std::string>& required_ids);

std::vector<OccupationScore> score_occupations(const SkillProfile& profile, const EmbeddingVector& doc_vector,
                                               const std::vector<Occupation>& occupations,
                                               const MappingConfig& config);

// Each profile skill is queried against the course index with its vector from
// `skill_index`; skills absent there are embedded from their label.
std::vector<CourseRecommendation> recommend_courses(const SkillProfile& profile, const VectorIndex& course_index,
                                                    const VectorIndex& skill_index, const MappingConfig& config,
                                                    const Embedder& embedder);

// Normalized mean of the chunk embeddings.
EmbeddingVector document_vector(const std::vector<Chunk>& chunks, const Embedder& embedder);

// All 17 goals, relevance descending, ties by goal id.
std::vector<SdgScore> score_sdgs(const EmbeddingVector& doc_vector, const std::vector<SdgEntry>& sdgs);

}  // namespace skillmap

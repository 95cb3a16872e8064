#include "skillmap/mapping.hpp"

#include "skillmap/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace skillmap {

void MappingConfig::validate() const {
  if (!(w_rho >= 0.0) || !(w_sigma >= 0.0)) throw Error(ErrorCode::ConfigError, "mapping weights must be >= 0");
  if (std::abs(w_rho + w_sigma - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError, "mapping.w_rho + mapping.w_sigma must equal 1");
  }
  if (!(tau_c >= -1.0 && tau_c <= 1.0)) throw Error(ErrorCode::ConfigError, "mapping.tau_c must be in [-1, 1]");
  if (top_occupations < 1 || top_courses < 1) {
    throw Error(ErrorCode::ConfigError, "mapping.top_occupations and mapping.top_courses must be >= 1");
  }
}

double overlap_ratio(const std::vector<std::string>& extracted_ids, const std::vector<std::string>& required_ids) {
  const std::set<std::string> required(required_ids.begin(), required_ids.end());
  if (required.empty()) return 0.0;
  const std::set<std::string> extracted(extracted_ids.begin(), extracted_ids.end());
  std::size_t common = 0;
  for (const auto& id : required) common += extracted.count(id);
  return static_cast<double>(common) / static_cast<double>(required.size());
}

std::vector<OccupationScore> score_occupations(const SkillProfile& profile, const EmbeddingVector& doc_vector,
                                               const std::vector<Occupation>& occupations,
                                               const MappingConfig& config) {
  config.validate();
  if (occupations.empty()) throw Error(ErrorCode::EmptyCatalog, "no occupations to score");
  std::set<std::string> extracted;
  for (const auto& m : profile.matches) extracted.insert(m.skill_id);
  const std::vector<std::string> extracted_ids(extracted.begin(), extracted.end());

  std::vector<OccupationScore> out;
  out.reserve(occupations.size());
  for (const Occupation& o : occupations) {
    OccupationScore s;
    s.occupation_id = o.id;
    s.title = o.title;
    s.overlap_ratio = overlap_ratio(extracted_ids, o.required_skill_ids);
    s.text_similarity = cosine_similarity(doc_vector, o.description_vector);
    s.combined = config.w_rho * s.overlap_ratio + config.w_sigma * s.text_similarity;
    for (const auto& id : o.required_skill_ids) {
      if (extracted.count(id)) s.matched_skill_ids.push_back(id);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const OccupationScore& a, const OccupationScore& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return a.occupation_id < b.occupation_id;
  });
  if (out.size() > config.top_occupations) out.resize(config.top_occupations);
  return out;
}

std::vector<CourseRecommendation> recommend_courses(const SkillProfile& profile, const VectorIndex& course_index,
                                                    const VectorIndex& skill_index, const MappingConfig& config,
                                                    const Embedder& embedder) {
  config.validate();
  struct Contribution {
    std::string skill_id;
    double score;
  };
  std::map<std::string, std::vector<Contribution>> by_course;
  for (const SkillMatch& m : profile.matches) {
    std::vector<SearchHit> hits;
    if (auto pos = skill_index.position(m.skill_id)) {
      hits = search_threshold(course_index, skill_index.vector(*pos), config.tau_c);
    } else {
      const EmbeddingVector v = embedder.embed_item(m.skill_id, m.label.empty() ? m.skill_id : m.label);
      hits = search_threshold(course_index, v.span(), config.tau_c);
    }
    for (const SearchHit& h : hits) by_course[h.id].push_back({m.skill_id, h.score});
  }

  std::vector<CourseRecommendation> out;
  out.reserve(by_course.size());
  for (auto& [course_id, contribs] : by_course) {
    std::sort(contribs.begin(), contribs.end(), [](const Contribution& a, const Contribution& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.skill_id < b.skill_id;
    });
    CourseRecommendation r;
    r.course_id = course_id;
    r.title = course_index.label(*course_index.position(course_id));
    r.score = contribs.front().score;
    for (const auto& c : contribs) r.matched_skill_ids.push_back(c.skill_id);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const CourseRecommendation& a, const CourseRecommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.course_id < b.course_id;
  });
  if (out.size() > config.top_courses) out.resize(config.top_courses);
  return out;
}

EmbeddingVector document_vector(const std::vector<Chunk>& chunks, const Embedder& embedder) {
  if (chunks.empty()) throw Error(ErrorCode::EmptyDocument, "document has no chunks");
  std::vector<double> sum(embedder.dim(), 0.0);
  for (const Chunk& c : chunks) {
    const EmbeddingVector v = embedder.embed(c.text);
    if (v.dim() != sum.size()) throw Error(ErrorCode::DimensionMismatch, "chunk vector dim differs from embedder dim");
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v.values[k];
  }
  // Dividing by the chunk count does not change the direction.
  return normalize(std::span<const double>(sum));
}

std::vector<SdgScore> score_sdgs(const EmbeddingVector& doc_vector, const std::vector<SdgEntry>& sdgs) {
  std::vector<SdgScore> out;
  out.reserve(sdgs.size());
  for (const SdgEntry& e : sdgs) out.push_back({e.id, e.name, cosine_similarity(doc_vector, e.vector)});
  std::sort(out.begin(), out.end(), [](const SdgScore& a, const SdgScore& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.sdg_id < b.sdg_id;
  });
  return out;
}

}  // namespace skillmap

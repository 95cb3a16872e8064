#pragma once

#include "skillmap/catalog.hpp"
#include "skillmap/config.hpp"
#include "skillmap/embedding.hpp"
#include "skillmap/extraction.hpp"
#include "skillmap/mapping.hpp"
#include "skillmap/textprep.hpp"
#include "skillmap/vindex.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace skillmap {

// Everything an analysis needs, loaded once and shared read-only.
struct AppState {
  AppConfig config;
  std::shared_ptr<CachedEmbedder> embedder;
  SkillCatalog skills;
  std::vector<Occupation> occupations;  // description vectors filled
  std::vector<Course> courses;
  std::vector<SdgEntry> sdgs;           // vectors filled
  VectorIndex skill_index;
  VectorIndex course_index;
};

// Reads catalogs, the optional embedding store and index files. Indexes
// without a configured file are built from the catalogs.
std::shared_ptr<const AppState> load_app_state(const AppConfig& config);

// Throws IoError for any configured input file that does not exist.
void check_input_files(const AppConfig& config);

struct StageTimings {
  double prep_ms = 0.0;
  double extraction_ms = 0.0;
  double mapping_ms = 0.0;
  double sdg_ms = 0.0;
  double total_ms = 0.0;
};

struct AnalysisResult {
  std::string document_name;
  std::size_t chunk_count = 0;
  std::size_t removed_artifact_count = 0;
  SkillProfile profile;
  std::vector<OccupationScore> occupations;
  std::vector<CourseRecommendation> courses;
  std::vector<SdgScore> sdgs;
  StageTimings timings;
};

AnalysisResult analyze_document(const AppState& state, const RawDocument& doc);

struct JsonOptions {
  bool timings = true;
  bool debug = false;  // adds near-duplicate drops and cleaning counts
};

nlohmann::ordered_json to_json(const AnalysisResult& result, const JsonOptions& options = {});

// Fixed-width text tables for terminals.
std::string render_tables(const AnalysisResult& result);

}  // namespace skillmap

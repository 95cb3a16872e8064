#pragma once

#include "skillmap/catalog.hpp"
#include "skillmap/corpus.hpp"
#include "skillmap/embedding.hpp"
#include "skillmap/extraction.hpp"
#include "skillmap/metrics.hpp"
#include "skillmap/sdg_scorer.hpp"
#include "skillmap/textprep.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace skillmap {

struct ValidationConfig {
  std::size_t subset_size = 200;
  GeneratorOptions generator;  // generator.count is the corpus size
};

struct DocumentOutcome {
  std::string name;
  DocKind kind = DocKind::explicit_mention;
  std::vector<std::string> truth;
  std::vector<std::string> predicted;
  MatchCounts counts;
};

struct ValidationReport {
  std::string suite;  // "skills" or "sdg"
  std::uint64_t seed = 0;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
  MetricsReport explicit_metrics;
  MetricsReport implicit_metrics;
  MetricsReport overall;
  std::vector<DocumentOutcome> documents;
  std::vector<std::string> warnings;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  // Fixed-width rows for explicit / implicit / overall.
  [[nodiscard]] std::string to_table() const;
};

// Builds the per-kind and overall metrics from the document outcomes.
void finalize_report(ValidationReport& report);

ValidationReport run_skills_validation(const SkillCatalog& catalog, const PrepConfig& prep,
                                       const ExtractionConfig& extraction, const Embedder& embedder,
                                       std::uint64_t seed, const ValidationConfig& config = {});

ValidationReport run_sdg_validation(const std::vector<SdgEntry>& sdgs, const SdgScorerConfig& scorer_config,
                                    const Embedder& embedder, std::uint64_t seed,
                                    const ValidationConfig& config = {});

// Standalone HTML page with an inline SVG bar chart of per-kind P/R/F1.
std::string render_report_chart(const ValidationReport& report);

}  // namespace skillmap

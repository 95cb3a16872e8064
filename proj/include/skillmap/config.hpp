#pragma once

#include "skillmap/embedding.hpp"
#include "skillmap/extraction.hpp"
#include "skillmap/mapping.hpp"
#include "skillmap/sdg_scorer.hpp"
#include "skillmap/textprep.hpp"
#include "skillmap/validation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap {

struct ValidationSettings {
  std::uint64_t seed = 1;
  ValidationConfig run;
};

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cors_origin = "http://localhost:5173";
  int threads = 8;
};

struct PathSettings {
  std::string skills;
  std::string occupations;
  std::string courses;
  std::string sdgs;
  std::string skill_index;   // empty: build in memory from the catalog
  std::string course_index;  // empty: build in memory from the catalog
  std::string embeddings;    // EmbeddingStore, required for embedding.kind = precomputed
};

// Effective configuration. Layers are applied in order defaults, file,
// environment, command-line overrides; later layers win.
struct AppConfig {
  PrepConfig prep;
  EmbedderSpec embedding;
  ExtractionConfig extraction;
  MappingConfig mapping;
  SdgScorerConfig sdg_scorer;
  ValidationSettings validation;
  ServiceSettings service;
  PathSettings paths;

  AppConfig();  // paths default to the bundled data directory

  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
  // Serialized in the config-file grammar; parsing it back gives the same config.
  [[nodiscard]] std::string to_text() const;
};

// Every recognised "section.key".
[[nodiscard]] std::vector<std::string> config_keys();

void apply_setting(AppConfig& config, std::string_view section, std::string_view key, std::string_view value,
                   const std::string& origin);
void apply_config_text(AppConfig& config, std::string_view text, const std::string& source);
void apply_config_file(AppConfig& config, const std::filesystem::path& path);

// SKILLMAP_<SECTION>_<KEY>, e.g. SKILLMAP_EXTRACTION_TAU=0.4.
using EnvLookup = std::function<const char*(const char*)>;
void apply_environment(AppConfig& config, const EnvLookup& lookup);

// "section.key=value".
void apply_override(AppConfig& config, std::string_view assignment);

[[nodiscard]] std::string default_data_dir();

}  // namespace skillmap

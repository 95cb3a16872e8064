#pragma once

#include "skillmap/embedding.hpp"
#include "skillmap/vindex.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmap {

// RFC 4180 CSV: quoted fields may hold commas, doubled quotes and newlines.
struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;

  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

struct Skill {
  std::string id;
  std::string label;
  std::vector<std::string> alt_labels;
  std::string description;
  std::string category;  // empty when the catalog has no category column

  // Texts embedded separately for the skill vector: the label, the
  // alternative labels joined into one sentence list, the description.
  // Empty parts are left out.
  [[nodiscard]] std::vector<std::string> index_parts() const;
};

class SkillCatalog {
 public:
  SkillCatalog() = default;
  explicit SkillCatalog(std::vector<Skill> skills);

  [[nodiscard]] const std::vector<Skill>& skills() const noexcept { return skills_; }
  [[nodiscard]] std::size_t size() const noexcept { return skills_.size(); }
  [[nodiscard]] const Skill* find(std::string_view id) const;
  [[nodiscard]] bool has_categories() const noexcept;

 private:
  std::vector<Skill> skills_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

SkillCatalog parse_skills(std::string_view csv_text, const std::string& source = "skills.csv");
SkillCatalog load_skills(const std::filesystem::path& path);

struct Occupation {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> required_skill_ids;  // sorted, unique, nonempty
  EmbeddingVector description_vector;           // filled by embed_occupations
};

// Required skill ids must resolve against `skills`.
std::vector<Occupation> parse_occupations(std::string_view csv_text, const SkillCatalog& skills,
                                          const std::string& source = "occupations.csv");
std::vector<Occupation> load_occupations(const std::filesystem::path& path, const SkillCatalog& skills);
void embed_occupations(std::vector<Occupation>& occupations, const Embedder& embedder);

struct Course {
  std::string id;
  std::string title;
  std::string description;
  std::string url;

  [[nodiscard]] std::string index_text() const;
};

std::vector<Course> parse_courses(std::string_view csv_text, const std::string& source = "courses.csv");
std::vector<Course> load_courses(const std::filesystem::path& path);

struct SdgEntry {
  int id = 0;
  std::string name;
  std::string description;
  std::vector<std::string> keywords;  // lowercased
  EmbeddingVector vector;             // filled by embed_sdgs

  // Text embedded for the goal: "<name>. <description>".
  [[nodiscard]] std::string embed_text() const;
};

// Exactly the 17 goals, ids 1..17, returned in id order. The keywords column
// is optional; without it keywords are the content words of the description.
std::vector<SdgEntry> parse_sdgs(std::string_view csv_text, const std::string& source = "sdgs.csv");
std::vector<SdgEntry> load_sdgs(const std::filesystem::path& path);
void embed_sdgs(std::vector<SdgEntry>& sdgs, const Embedder& embedder);

// The stored vector for the skill id when the embedder has one, else the
// normalized sum of the unit vectors of index_parts().
EmbeddingVector skill_vector(const Skill& skill, const Embedder& embedder);

VectorIndex build_skill_index(const SkillCatalog& skills, const Embedder& embedder);
VectorIndex build_course_index(const std::vector<Course>& courses, const Embedder& embedder);

// Small English stopword list shared by the heuristics that need one.
[[nodiscard]] bool is_stopword(std::string_view lowercase_word);

}  // namespace skillmap

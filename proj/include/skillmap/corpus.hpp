#pragma once

#include "skillmap/catalog.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap {

enum class DocKind { explicit_mention, implicit_mention };
enum class DocTarget { skills, sdg };

[[nodiscard]] std::string_view to_string(DocKind kind) noexcept;  // "explicit" / "implicit"
[[nodiscard]] std::string_view to_string(DocTarget target) noexcept;

struct TestDocument {
  std::string name;
  DocKind kind = DocKind::explicit_mention;
  DocTarget target = DocTarget::skills;
  std::string text;
  std::vector<std::string> ground_truth_ids;  // sorted
};

struct GeneratedCorpus {
  std::vector<TestDocument> documents;
  std::vector<std::string> warnings;
};

// Seeded sample of `n` skill ids, returned in catalog order. Stratified by
// category (largest-remainder quotas) when the catalog has categories.
std::vector<std::string> select_skill_subset(const SkillCatalog& catalog, std::size_t n, std::uint64_t seed);

struct GeneratorOptions {
  std::size_t count = 80;            // first half explicit, second half implicit
  int min_skills = 3;
  int max_skills = 6;
  std::size_t label_sentences = 3;   // explicit: template sentences carrying the label
  std::size_t explicit_clauses = 2;  // explicit: base-form description clauses
  std::size_t alt_sentences = 6;     // implicit: template sentences per alternative label
  std::size_t clause_repeats = 2;    // implicit: base-form sentences per description clause
};

// Alternative labels that do not contain the preferred label.
[[nodiscard]] std::vector<std::string> usable_alt_labels(const Skill& skill);

// Skills lacking paraphrase material are skipped for implicit documents with
// a MissingAltLabels warning and another skill is drawn in their place.
GeneratedCorpus generate_test_documents(const SkillCatalog& catalog, const std::vector<std::string>& skill_ids,
                                        std::uint64_t seed, const GeneratorOptions& options = {});

// Explicit documents carry each goal's name as a heading line; implicit ones
// only its keywords. 1-3 goals per document, followed by a paragraph of
// general policy context.
GeneratedCorpus generate_sdg_documents(const std::vector<SdgEntry>& sdgs, std::uint64_t seed,
                                       std::size_t count = 80);

}  // namespace skillmap

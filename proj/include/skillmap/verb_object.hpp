#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skillmap {

struct VerbObject {
  std::string verb;
  std::string object;

  bool operator==(const VerbObject&) const = default;
};

// Base-form verbs used by the phrase heuristics ("manage", "install", ...).
[[nodiscard]] bool is_base_verb(std::string_view lowercase_word);

// A base verb or its -s / -es / -ed / -ied inflection, a word with one of the
// suffixes -ing, -ize, -yse, -yze, -age, or a listed irregular form.
[[nodiscard]] bool is_verb_like(std::string_view lowercase_word);

// Progressive form of a base verb: "manage" -> "managing", "plan" -> "planning".
[[nodiscard]] std::string ing_form(std::string_view verb);

// Pairs of a verb-like token and the following object (leading stopwords
// skipped, then up to four tokens that are neither stopwords nor verb-like).
// Pairs with an empty object are dropped. Sentences end at . ! ? or newline.
std::vector<VerbObject> extract_verb_object_phrases(std::string_view text);

// Clauses of an imperative description ("Collect, clean and model raw data
// to ...") as base verb + object. Used to paraphrase a skill without naming it.
std::vector<VerbObject> description_clauses(std::string_view description);

}  // namespace skillmap

#pragma once

#include "skillmap/catalog.hpp"
#include "skillmap/embedding.hpp"

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skillmap {

struct SdgScorerConfig {
  double w_seq = 0.4;
  double w_term = 0.3;
  double w_sem = 0.3;
  double explicit_threshold = 0.45;
  double implicit_threshold = 0.30;

  void validate() const;
};

// difflib-style ratio 2M / (|a| + |b|), M the total size of the matching
// blocks found by recursive longest-common-substring. Byte-wise; 1 for two
// empty strings.
[[nodiscard]] double ratcliff_obershelp(std::string_view a, std::string_view b);

// Sentences split at . ! ? and newlines, trimmed, empties dropped.
[[nodiscard]] std::vector<std::string> split_sentences(std::string_view text);

struct SdgComponents {
  double seq = 0.0;
  double term = 0.0;
  double sem = 0.0;
  double score = 0.0;
};

// Keyword idf is computed once over the 17 goal descriptions:
// idf(k) = ln((1 + 17) / (1 + df(k))) + 1, df counting descriptions that
// contain k as a whole-word phrase.
class SdgScorer {
 public:
  SdgScorer(std::vector<SdgEntry> sdgs, SdgScorerConfig config);

  [[nodiscard]] const std::vector<SdgEntry>& sdgs() const noexcept { return sdgs_; }
  [[nodiscard]] const SdgScorerConfig& config() const noexcept { return config_; }
  [[nodiscard]] double idf(const std::string& keyword) const;

  // Entry vectors that are still empty are embedded on the fly.
  [[nodiscard]] SdgComponents score(std::string_view text, const SdgEntry& entry, const Embedder& embedder) const;
  // One result per goal, in catalog order. The text is embedded once.
  [[nodiscard]] std::vector<SdgComponents> score_all(std::string_view text, const Embedder& embedder) const;

 private:
  struct PreparedText;
  [[nodiscard]] SdgComponents score_prepared(const PreparedText& t, const SdgEntry& entry,
                                             const Embedder& embedder) const;

  std::vector<SdgEntry> sdgs_;
  SdgScorerConfig config_;
  std::unordered_map<std::string, double> idf_;
};

double score_sdg_multimethod(std::string_view text, const SdgEntry& entry, const std::vector<SdgEntry>& all_sdgs,
                             const SdgScorerConfig& config, const Embedder& embedder);

// Whole-word phrase containment over lowercased word tokens.
[[nodiscard]] bool contains_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase);

}  // namespace skillmap

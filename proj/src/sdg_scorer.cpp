#include "skillmap/sdg_scorer.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"
#include "skillmap/vindex.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace skillmap {

void SdgScorerConfig::validate() const {
  if (w_seq < 0.0 || w_term < 0.0 || w_sem < 0.0) throw Error(ErrorCode::ConfigError, "sdg_scorer weights must be >= 0");
  if (std::abs(w_seq + w_term + w_sem - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError, "sdg_scorer weights must sum to 1");
  }
  for (double t : {explicit_threshold, implicit_threshold}) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::ConfigError, "sdg_scorer thresholds must be in [0, 1]");
  }
}

namespace {

struct Block {
  std::size_t i, j, size;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi); earliest in a, then in b.
Block longest_match(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi, std::size_t blo,
                    std::size_t bhi) {
  Block best{alo, blo, 0};
  std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      cur[col] = a[i] == b[j] ? prev[col - 1] + 1 : 0;
      if (cur[col] > best.size) best = {i + 1 - cur[col], j + 1 - cur[col], cur[col]};
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace

double ratcliff_obershelp(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t matched = 0;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> todo{{0, a.size(), 0, b.size()}};
  while (!todo.empty()) {
    const auto [alo, ahi, blo, bhi] = todo.back();
    todo.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    const Block m = longest_match(a, b, alo, ahi, blo, bhi);
    if (m.size == 0) continue;
    matched += m.size;
    todo.emplace_back(alo, m.i, blo, m.j);
    todo.emplace_back(m.i + m.size, ahi, m.j + m.size, bhi);
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '.' || text[i] == '!' || text[i] == '?' || text[i] == '\n') {
      const std::string_view s = text::trim(text.substr(start, i - start));
      if (!s.empty()) out.emplace_back(s);
      start = i + 1;
    }
  }
  return out;
}

bool contains_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

struct SdgScorer::PreparedText {
  std::vector<std::string> sentences;  // lowercased
  std::vector<std::string> tokens;
  EmbeddingVector vector;
};

SdgScorer::SdgScorer(std::vector<SdgEntry> sdgs, SdgScorerConfig config)
    : sdgs_(std::move(sdgs)), config_(config) {
  config_.validate();
  if (sdgs_.empty()) throw Error(ErrorCode::EmptyCatalog, "SDG scorer needs the goal catalog");
  std::vector<std::vector<std::string>> descriptions;
  for (const auto& e : sdgs_) descriptions.push_back(text::word_tokens(e.description));
  const double n = static_cast<double>(sdgs_.size());
  for (const auto& e : sdgs_) {
    for (const auto& k : e.keywords) {
      if (idf_.count(k)) continue;
      const std::vector<std::string> phrase = text::word_tokens(k);
      std::size_t df = 0;
      for (const auto& d : descriptions) df += contains_phrase(d, phrase) ? 1 : 0;
      idf_[k] = std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
    }
  }
}

double SdgScorer::idf(const std::string& keyword) const {
  auto it = idf_.find(keyword);
  return it == idf_.end() ? 0.0 : it->second;
}

SdgComponents SdgScorer::score_prepared(const PreparedText& t, const SdgEntry& entry, const Embedder& embedder) const {
  SdgComponents c;
  const std::string name = text::to_lower(entry.name);
  for (const auto& s : t.sentences) c.seq = std::max(c.seq, ratcliff_obershelp(s, name));

  double matched = 0.0;
  double total = 0.0;
  for (const auto& k : entry.keywords) {
    const double w = idf(k);
    total += w;
    if (contains_phrase(t.tokens, text::word_tokens(k))) matched += w;
  }
  c.term = total > 0.0 ? matched / total : 0.0;

  if (!t.vector.values.empty()) {
    const EmbeddingVector goal = entry.vector.values.empty() ? embedder.embed_item("SDG" + std::to_string(entry.id), entry.embed_text())
                                                             : entry.vector;
    c.sem = std::clamp(cosine_similarity(t.vector, goal), 0.0, 1.0);
  }
  c.score = config_.w_seq * c.seq + config_.w_term * c.term + config_.w_sem * c.sem;
  return c;
}

SdgComponents SdgScorer::score(std::string_view text, const SdgEntry& entry, const Embedder& embedder) const {
  PreparedText t;
  for (auto& s : split_sentences(text)) t.sentences.push_back(text::to_lower(s));
  t.tokens = text::word_tokens(text);
  if (!t.tokens.empty()) t.vector = embedder.embed(text);
  return score_prepared(t, entry, embedder);
}

std::vector<SdgComponents> SdgScorer::score_all(std::string_view text, const Embedder& embedder) const {
  PreparedText t;
  for (auto& s : split_sentences(text)) t.sentences.push_back(text::to_lower(s));
  t.tokens = text::word_tokens(text);
  if (!t.tokens.empty()) t.vector = embedder.embed(text);
  std::vector<SdgComponents> out;
  out.reserve(sdgs_.size());
  for (const auto& e : sdgs_) out.push_back(score_prepared(t, e, embedder));
  return out;
}

double score_sdg_multimethod(std::string_view text, const SdgEntry& entry, const std::vector<SdgEntry>& all_sdgs,
                             const SdgScorerConfig& config, const Embedder& embedder) {
  const SdgScorer scorer(all_sdgs, config);
  return scorer.score(text, entry, embedder).score;
}

}  // namespace skillmap

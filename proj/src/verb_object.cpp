#include "skillmap/verb_object.hpp"

#include "skillmap/catalog.hpp"
#include "skillmap/text_util.hpp"

#include <set>

namespace skillmap {

namespace {

const std::set<std::string_view>& base_verbs() {
  static const std::set<std::string_view> kVerbs = {
      "acquire",   "act",        "adapt",     "administer", "adopt",     "advise",    "allocate",
      "analyse",   "analyze",    "apply",     "arrange",    "assess",    "assist",    "attract",
      "audit",     "bargain",    "breed",     "build",      "calculate", "capture",   "channel",
      "clean",     "collect",    "combine",   "communicate", "compare",  "compile",   "complete",
      "compose",   "compute",    "configure", "conserve",   "control",   "coordinate", "create",
      "cultivate", "cut",        "define",    "deliver",    "deploy",    "design",    "develop",
      "diagnose",  "dispense",   "draft",     "enforce",    "ensure",    "erect",     "establish",
      "evaluate",  "examine",    "extract",   "forecast",   "formulate", "gather",    "give",
      "grow",      "guide",      "help",      "hold",       "identify",  "implement", "inspect",
      "inspire",   "install",    "integrate", "interact",   "interpret", "join",      "keep",
      "lead",      "locate",     "maintain",  "manage",     "measure",   "mediate",   "mobilise",
      "model",     "monitor",    "mount",     "negotiate",  "operate",   "organise",  "organize",
      "oversee",   "participate", "plan",     "prepare",    "present",   "process",   "produce",
      "program",   "project",    "protect",   "provide",    "provision", "publish",   "quantify",
      "rear",      "recognise",  "record",    "recruit",    "redesign",  "reduce",    "rehabilitate",
      "render",    "repair",     "respond",   "review",     "run",       "sample",    "schedule",
      "seek",      "separate",   "service",   "set",        "source",    "store",     "study",
      "supervise", "support",    "teach",     "test",       "track",     "train",     "transform",
      "tune",      "turn",       "understand", "use",       "verify",    "weigh",     "write"};
  return kVerbs;
}

const std::set<std::string_view>& irregular_forms() {
  static const std::set<std::string_view> kForms = {
      "sat",  "built", "led",  "kept", "held", "grew",  "grown", "wrote", "written", "ran",
      "gave", "given", "made", "took", "taken", "sought", "taught", "bred", "understood"};
  return kForms;
}

// Nouns and prepositions that merely look like progressive verbs.
const std::set<std::string_view>& ing_exceptions() {
  static const std::set<std::string_view> kNot = {
      "during", "thing",  "things", "nothing", "something", "anything", "everything",
      "king",   "ring",   "spring", "string",  "morning",   "evening",  "ceiling", "wing"};
  return kNot;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_sentence_break(char c) { return c == '.' || c == '!' || c == '?' || c == '\n'; }

}  // namespace

bool is_base_verb(std::string_view w) { return base_verbs().count(w) != 0; }

bool is_verb_like(std::string_view w) {
  if (w.empty()) return false;
  if (is_base_verb(w) || irregular_forms().count(w)) return true;
  if (ends_with(w, "ing")) return w.size() >= 5 && !ing_exceptions().count(w);
  for (std::string_view suffix : {"ize", "yse", "yze", "age"}) {
    if (ends_with(w, suffix) && w.size() >= suffix.size() + 2) return true;
  }
  const auto stem_is_verb = [&](std::size_t cut, std::string_view add) {
    if (w.size() <= cut) return false;
    std::string stem(w.substr(0, w.size() - cut));
    stem += add;
    return is_base_verb(stem);
  };
  if (ends_with(w, "ied") && stem_is_verb(3, "y")) return true;
  if (ends_with(w, "ies") && stem_is_verb(3, "y")) return true;
  if (ends_with(w, "ed") && (stem_is_verb(2, "") || stem_is_verb(1, ""))) return true;
  if (ends_with(w, "es") && stem_is_verb(2, "")) return true;
  if (ends_with(w, "s") && stem_is_verb(1, "")) return true;
  return false;
}

std::string ing_form(std::string_view verb) {
  std::string v = text::to_lower(verb);
  static const std::set<std::string_view> kDoubling = {"plan", "set", "stop", "run", "map",
                                                       "ship", "cut", "program"};
  if (kDoubling.count(v)) return v + v.back() + "ing";
  if (ends_with(v, "ie")) return v.substr(0, v.size() - 2) + "ying";
  if (ends_with(v, "e") && !ends_with(v, "ee") && !ends_with(v, "ye") && !ends_with(v, "oe")) {
    return v.substr(0, v.size() - 1) + "ing";
  }
  return v + "ing";
}

std::vector<VerbObject> extract_verb_object_phrases(std::string_view text) {
  std::vector<VerbObject> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = start;
    while (end < text.size() && !is_sentence_break(text[end])) ++end;
    const std::vector<std::string> toks = text::word_tokens(text.substr(start, end - start));
    std::size_t i = 0;
    while (i < toks.size()) {
      if (!is_verb_like(toks[i])) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < toks.size() && is_stopword(toks[j])) ++j;
      std::vector<std::string> object;
      while (j < toks.size() && object.size() < 4 && !is_stopword(toks[j]) && !is_verb_like(toks[j])) {
        object.push_back(toks[j++]);
      }
      if (object.empty()) {
        ++i;
        continue;
      }
      out.push_back({toks[i], text::join(object, " ")});
      i = j;
    }
    start = end + 1;
  }
  return out;
}

std::vector<VerbObject> description_clauses(std::string_view description) {
  // Words (letters, apostrophes, hyphens) and the punctuation that ends a clause.
  std::vector<std::vector<std::string>> segments(1);
  std::size_t i = 0;
  const auto is_word_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '\'' || c == '-';
  };
  while (i < description.size()) {
    const char c = description[i];
    if (c == ',' || c == ';' || c == '.') {
      segments.emplace_back();
      ++i;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < description.size() && is_word_char(description[j])) ++j;
      std::string w = text::to_lower(description.substr(i, j - i));
      if (w == "and" || w == "to" || w == "so" || w == "while" || w == "that" || w == "or") {
        segments.emplace_back();
      } else {
        segments.back().push_back(std::move(w));
      }
      i = j;
    } else {
      ++i;
    }
  }

  std::vector<VerbObject> out;
  std::vector<std::string> pending;
  bool first = true;
  for (const auto& seg : segments) {
    if (seg.empty()) continue;
    const std::string& verb = seg.front();
    const bool counts = first || is_base_verb(verb);
    first = false;
    if (!counts) continue;
    std::vector<std::string> object;
    for (std::size_t k = 1; k < seg.size() && object.size() < 4; ++k) {
      if (!is_stopword(seg[k])) object.push_back(seg[k]);
    }
    if (object.empty()) {
      pending.push_back(verb);
      continue;
    }
    const std::string obj = text::join(object, " ");
    for (const auto& p : pending) out.push_back({p, obj});
    pending.clear();
    out.push_back({verb, obj});
  }
  return out;
}

}  // namespace skillmap

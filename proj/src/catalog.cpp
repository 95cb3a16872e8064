#include "skillmap/catalog.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace skillmap {

namespace {

[[noreturn]] void catalog_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::CatalogError, source + ": row " + std::to_string(line) + ": " + what);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
  text = text::strip_utf8_bom(text);
  if (!text::is_valid_utf8(text)) throw Error(ErrorCode::CatalogError, source + ": not valid UTF-8");

  std::vector<CsvRow> records;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool at_record_end = false;
    while (!at_record_end) {
      field.clear();
      if (i < text.size() && text[i] == '"') {
        ++i;
        for (;;) {
          if (i >= text.size()) catalog_error(source, row.line, "unterminated quoted field");
          const char c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              field.push_back('"');
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          catalog_error(source, row.line, "unexpected character after closing quote");
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') catalog_error(source, row.line, "stray quote in unquoted field");
          field.push_back(text[i++]);
        }
      }
      row.fields.push_back(field);
      if (i < text.size() && text[i] == ',') {
        ++i;
      } else {
        if (i < text.size() && text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        at_record_end = true;
      }
    }
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) records.push_back(std::move(row));
  }
  if (records.empty()) throw Error(ErrorCode::CatalogError, source + ": missing header row");

  CsvTable table;
  table.header = std::move(records.front().fields);
  for (auto& h : table.header) h = std::string(text::trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != table.header.size()) {
      catalog_error(source, records[r].line,
                    "expected " + std::to_string(table.header.size()) + " fields, found " +
                        std::to_string(records[r].fields.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path), path.string());
}

namespace {

std::size_t require_column(const CsvTable& t, std::string_view name, const std::string& source) {
  auto col = t.column(name);
  if (!col) throw Error(ErrorCode::CatalogError, source + ": missing column '" + std::string(name) + "'");
  return *col;
}

std::string field(const CsvRow& row, std::size_t col) { return std::string(text::trim(row.fields[col])); }

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (const std::string& part : text::split(s, '|')) {
    const std::string_view t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

// --- skills ------------------------------------------------------------------

std::vector<std::string> Skill::index_parts() const {
  std::vector<std::string> parts{label};
  if (!alt_labels.empty()) parts.push_back(text::join(alt_labels, ". "));
  if (!description.empty()) parts.push_back(description);
  return parts;
}

SkillCatalog::SkillCatalog(std::vector<Skill> skills) : skills_(std::move(skills)) {
  for (std::size_t i = 0; i < skills_.size(); ++i) {
    if (!by_id_.emplace(skills_[i].id, i).second) {
      throw Error(ErrorCode::CatalogError, "duplicate skill id '" + skills_[i].id + "'");
    }
  }
}

const Skill* SkillCatalog::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &skills_[it->second];
}

bool SkillCatalog::has_categories() const noexcept {
  return std::any_of(skills_.begin(), skills_.end(), [](const Skill& s) { return !s.category.empty(); });
}

SkillCatalog parse_skills(std::string_view csv_text, const std::string& source) {
  const CsvTable t = parse_csv(csv_text, source);
  const std::size_t c_id = require_column(t, "id", source);
  const std::size_t c_label = require_column(t, "label", source);
  const std::size_t c_alt = require_column(t, "alt_labels", source);
  const std::size_t c_desc = require_column(t, "description", source);
  const auto c_cat = t.column("category");

  std::vector<Skill> skills;
  std::set<std::string> seen;
  for (const CsvRow& row : t.rows) {
    Skill s;
    s.id = field(row, c_id);
    s.label = field(row, c_label);
    s.alt_labels = split_list(row.fields[c_alt]);
    s.description = field(row, c_desc);
    if (c_cat) s.category = field(row, *c_cat);
    if (s.id.empty()) catalog_error(source, row.line, "empty id");
    if (s.label.empty()) catalog_error(source, row.line, "empty label for '" + s.id + "'");
    if (!seen.insert(s.id).second) catalog_error(source, row.line, "duplicate id '" + s.id + "'");
    skills.push_back(std::move(s));
  }
  if (skills.empty()) throw Error(ErrorCode::EmptyCatalog, source + ": no skills");
  return SkillCatalog(std::move(skills));
}

SkillCatalog load_skills(const std::filesystem::path& path) {
  return parse_skills(read_text_file(path), path.string());
}

// --- occupations -------------------------------------------------------------

std::vector<Occupation> parse_occupations(std::string_view csv_text, const SkillCatalog& skills,
                                          const std::string& source) {
  const CsvTable t = parse_csv(csv_text, source);
  const std::size_t c_id = require_column(t, "id", source);
  const std::size_t c_title = require_column(t, "title", source);
  const std::size_t c_desc = require_column(t, "description", source);
  const std::size_t c_req = require_column(t, "required_skill_ids", source);

  std::vector<Occupation> out;
  std::set<std::string> seen;
  for (const CsvRow& row : t.rows) {
    Occupation o;
    o.id = field(row, c_id);
    o.title = field(row, c_title);
    o.description = field(row, c_desc);
    o.required_skill_ids = split_list(row.fields[c_req]);
    std::sort(o.required_skill_ids.begin(), o.required_skill_ids.end());
    o.required_skill_ids.erase(std::unique(o.required_skill_ids.begin(), o.required_skill_ids.end()),
                               o.required_skill_ids.end());
    if (o.id.empty()) catalog_error(source, row.line, "empty id");
    if (!seen.insert(o.id).second) catalog_error(source, row.line, "duplicate id '" + o.id + "'");
    if (o.required_skill_ids.empty()) catalog_error(source, row.line, "no required skills for '" + o.id + "'");
    for (const auto& sid : o.required_skill_ids) {
      if (!skills.find(sid)) catalog_error(source, row.line, "unknown skill id '" + sid + "'");
    }
    out.push_back(std::move(o));
  }
  if (out.empty()) throw Error(ErrorCode::CatalogError, source + ": no occupations");
  return out;
}

std::vector<Occupation> load_occupations(const std::filesystem::path& path, const SkillCatalog& skills) {
  return parse_occupations(read_text_file(path), skills, path.string());
}

void embed_occupations(std::vector<Occupation>& occupations, const Embedder& embedder) {
  for (Occupation& o : occupations) {
    o.description_vector = embedder.embed_item(o.id, o.title + ". " + o.description);
  }
}

// --- courses -----------------------------------------------------------------

std::string Course::index_text() const { return title + ". " + description; }

std::vector<Course> parse_courses(std::string_view csv_text, const std::string& source) {
  const CsvTable t = parse_csv(csv_text, source);
  const std::size_t c_id = require_column(t, "id", source);
  const std::size_t c_title = require_column(t, "title", source);
  const std::size_t c_desc = require_column(t, "description", source);
  const std::size_t c_url = require_column(t, "url", source);

  std::vector<Course> out;
  std::set<std::string> seen;
  for (const CsvRow& row : t.rows) {
    Course c{field(row, c_id), field(row, c_title), field(row, c_desc), field(row, c_url)};
    if (c.id.empty()) catalog_error(source, row.line, "empty id");
    if (c.title.empty()) catalog_error(source, row.line, "empty title for '" + c.id + "'");
    if (!seen.insert(c.id).second) catalog_error(source, row.line, "duplicate id '" + c.id + "'");
    out.push_back(std::move(c));
  }
  if (out.empty()) throw Error(ErrorCode::CatalogError, source + ": no courses");
  return out;
}

std::vector<Course> load_courses(const std::filesystem::path& path) {
  return parse_courses(read_text_file(path), path.string());
}

// --- SDGs --------------------------------------------------------------------

std::string SdgEntry::embed_text() const { return name + ". " + description; }

std::vector<SdgEntry> parse_sdgs(std::string_view csv_text, const std::string& source) {
  const CsvTable t = parse_csv(csv_text, source);
  const std::size_t c_id = require_column(t, "id", source);
  const std::size_t c_name = require_column(t, "name", source);
  const std::size_t c_desc = require_column(t, "description", source);
  const auto c_kw = t.column("keywords");

  std::vector<SdgEntry> out(17);
  std::vector<bool> seen(18, false);
  for (const CsvRow& row : t.rows) {
    const std::string id_text = field(row, c_id);
    int id = 0;
    const auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || p != id_text.data() + id_text.size() || id < 1 || id > 17) {
      catalog_error(source, row.line, "SDG id must be an integer in 1..17, got '" + id_text + "'");
    }
    if (seen[id]) catalog_error(source, row.line, "duplicate SDG id " + id_text);
    seen[id] = true;
    SdgEntry& e = out[id - 1];
    e.id = id;
    e.name = field(row, c_name);
    e.description = field(row, c_desc);
    if (e.name.empty()) catalog_error(source, row.line, "empty name");
    if (c_kw) {
      for (const auto& k : split_list(row.fields[*c_kw])) e.keywords.push_back(text::to_lower(k));
    } else {
      std::set<std::string> uniq;
      for (const auto& w : text::word_tokens(e.description)) {
        if (w.size() > 2 && !is_stopword(w) && uniq.insert(w).second) e.keywords.push_back(w);
      }
    }
  }
  for (int g = 1; g <= 17; ++g) {
    if (!seen[g]) throw Error(ErrorCode::CatalogError, source + ": SDG " + std::to_string(g) + " missing");
  }
  return out;
}

std::vector<SdgEntry> load_sdgs(const std::filesystem::path& path) {
  return parse_sdgs(read_text_file(path), path.string());
}

void embed_sdgs(std::vector<SdgEntry>& sdgs, const Embedder& embedder) {
  for (SdgEntry& e : sdgs) e.vector = embedder.embed_item("SDG" + std::to_string(e.id), e.embed_text());
}

// --- indexes -----------------------------------------------------------------

EmbeddingVector skill_vector(const Skill& skill, const Embedder& embedder) {
  if (auto stored = embedder.lookup_item(skill.id)) return *stored;
  std::vector<double> sum(embedder.dim(), 0.0);
  for (const std::string& part : skill.index_parts()) {
    const EmbeddingVector v = embedder.embed(part);
    if (v.dim() != sum.size()) throw Error(ErrorCode::DimensionMismatch, "embedder returned a vector of the wrong dim");
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v.values[k];
  }
  return normalize(std::span<const double>(sum));
}

VectorIndex build_skill_index(const SkillCatalog& skills, const Embedder& embedder) {
  std::vector<CatalogEntry> entries;
  entries.reserve(skills.size());
  for (const Skill& s : skills.skills()) {
    entries.push_back({s.id, s.label, skill_vector(s, embedder)});
  }
  return build_index(std::move(entries));
}

VectorIndex build_course_index(const std::vector<Course>& courses, const Embedder& embedder) {
  std::vector<CatalogEntry> entries;
  entries.reserve(courses.size());
  for (const Course& c : courses) {
    entries.push_back({c.id, c.title, embedder.embed_item(c.id, c.index_text())});
  }
  return build_index(std::move(entries));
}

bool is_stopword(std::string_view w) {
  static const std::set<std::string_view> kStop = {
      "a",     "an",    "the",   "and",  "or",    "of",    "to",    "in",    "on",   "for",
      "with",  "by",    "from",  "at",   "as",    "that",  "so",    "their", "its",  "is",
      "are",   "be",    "into",  "across", "own", "one",   "s",     "this",  "these", "those",
      "it",    "they",  "them",  "we",   "our",   "you",   "your",  "he",    "she",  "his",
      "her",   "was",   "were",  "been", "being", "has",   "have",  "had",   "do",   "does",
      "did",   "not",   "no",    "but",  "if",    "then",  "than",  "such",  "can",  "will",
      "would", "should", "may",  "might", "must", "also",  "all",   "any",   "each", "other",
      "which", "who",   "whom",  "what", "when",  "where", "while", "how",   "there", "here",
      "about", "over",  "under", "up",   "down",  "out",   "very",  "more",  "most", "some",
      "via",   "per",   "within", "without", "through", "between", "both", "either", "neither", "nor"};
  return kStop.count(w) != 0;
}

}  // namespace skillmap

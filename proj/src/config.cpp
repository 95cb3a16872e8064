#include "skillmap/config.hpp"

#include "skillmap/error.hpp"
#include "skillmap/text_util.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef SKILLMAP_DATA_DIR
#define SKILLMAP_DATA_DIR "data"
#endif

namespace skillmap {

std::string default_data_dir() {
  if (const char* env = std::getenv("SKILLMAP_DATA_DIR"); env && *env) return env;
  return SKILLMAP_DATA_DIR;
}

namespace {

[[noreturn]] void bad_value(const std::string& origin, std::string_view section, std::string_view key,
                            std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::ConfigError, origin + ": " + std::string(section) + "." + std::string(key) + " = '" +
                                          std::string(value) + "' is not " + std::string(expected));
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(AppConfig&, std::string_view, const std::string&)> set;
  std::function<nlohmann::ordered_json(const AppConfig&)> get;
};

template <typename Member>
Field number_field(std::string_view section, std::string_view key, Member member) {
  return Field{section, key,
               [=](AppConfig& c, std::string_view v, const std::string& origin) {
                 auto& slot = member(c);
                 std::remove_reference_t<decltype(slot)> parsed{};
                 if (!parse_number(v, parsed)) bad_value(origin, section, key, v, "a number of the right type");
                 slot = parsed;
               },
               [=](const AppConfig& c) { return nlohmann::ordered_json(member(const_cast<AppConfig&>(c))); }};
}

template <typename Member>
Field string_field(std::string_view section, std::string_view key, Member member) {
  return Field{section, key, [=](AppConfig& c, std::string_view v, const std::string&) { member(c) = std::string(v); },
               [=](const AppConfig& c) { return nlohmann::ordered_json(member(const_cast<AppConfig&>(c))); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = [] {
    std::vector<Field> f;
    f.push_back(number_field("prep", "max_size_bytes", [](AppConfig& c) -> auto& { return c.prep.max_size_bytes; }));
    f.push_back(Field{"prep", "supported_formats",
                      [](AppConfig& c, std::string_view v, const std::string& origin) {
                        std::vector<DocumentFormat> formats;
                        for (const auto& part : text::split(v, ',')) {
                          const auto fmt = parse_document_format(part);
                          if (!fmt) bad_value(origin, "prep", "supported_formats", v, "a list of txt/html/xml/pre_extracted");
                          formats.push_back(*fmt);
                        }
                        c.prep.supported_formats = std::move(formats);
                      },
                      [](const AppConfig& c) {
                        auto arr = nlohmann::ordered_json::array();
                        for (auto fmt : c.prep.supported_formats) arr.push_back(std::string(to_string(fmt)));
                        return arr;
                      }});
    f.push_back(Field{"embedding", "kind",
                      [](AppConfig& c, std::string_view v, const std::string& origin) {
                        const auto kind = parse_embedder_kind(v);
                        if (!kind) bad_value(origin, "embedding", "kind", v, "hashed_ngram or precomputed");
                        c.embedding.kind = *kind;
                      },
                      [](const AppConfig& c) { return nlohmann::ordered_json(std::string(to_string(c.embedding.kind))); }});
    f.push_back(number_field("embedding", "dim", [](AppConfig& c) -> auto& { return c.embedding.dim; }));
    f.push_back(number_field("embedding", "seed", [](AppConfig& c) -> auto& { return c.embedding.seed; }));
    f.push_back(number_field("embedding", "cache_capacity", [](AppConfig& c) -> auto& { return c.embedding.cache_capacity; }));
    f.push_back(number_field("extraction", "tau", [](AppConfig& c) -> auto& { return c.extraction.tau; }));
    f.push_back(number_field("extraction", "chunk_size_limit", [](AppConfig& c) -> auto& { return c.extraction.chunk_size_limit; }));
    f.push_back(number_field("extraction", "dedup_similarity", [](AppConfig& c) -> auto& { return c.extraction.dedup_similarity; }));
    f.push_back(number_field("extraction", "max_skills", [](AppConfig& c) -> auto& { return c.extraction.max_skills; }));
    f.push_back(number_field("extraction", "workers", [](AppConfig& c) -> auto& { return c.extraction.workers; }));
    f.push_back(number_field("mapping", "w_rho", [](AppConfig& c) -> auto& { return c.mapping.w_rho; }));
    f.push_back(number_field("mapping", "w_sigma", [](AppConfig& c) -> auto& { return c.mapping.w_sigma; }));
    f.push_back(number_field("mapping", "tau_c", [](AppConfig& c) -> auto& { return c.mapping.tau_c; }));
    f.push_back(number_field("mapping", "top_occupations", [](AppConfig& c) -> auto& { return c.mapping.top_occupations; }));
    f.push_back(number_field("mapping", "top_courses", [](AppConfig& c) -> auto& { return c.mapping.top_courses; }));
    f.push_back(number_field("sdg_scorer", "w_seq", [](AppConfig& c) -> auto& { return c.sdg_scorer.w_seq; }));
    f.push_back(number_field("sdg_scorer", "w_term", [](AppConfig& c) -> auto& { return c.sdg_scorer.w_term; }));
    f.push_back(number_field("sdg_scorer", "w_sem", [](AppConfig& c) -> auto& { return c.sdg_scorer.w_sem; }));
    f.push_back(number_field("sdg_scorer", "explicit_threshold", [](AppConfig& c) -> auto& { return c.sdg_scorer.explicit_threshold; }));
    f.push_back(number_field("sdg_scorer", "implicit_threshold", [](AppConfig& c) -> auto& { return c.sdg_scorer.implicit_threshold; }));
    f.push_back(number_field("validation", "seed", [](AppConfig& c) -> auto& { return c.validation.seed; }));
    f.push_back(number_field("validation", "subset_size", [](AppConfig& c) -> auto& { return c.validation.run.subset_size; }));
    f.push_back(number_field("validation", "documents", [](AppConfig& c) -> auto& { return c.validation.run.generator.count; }));
    f.push_back(number_field("validation", "min_skills", [](AppConfig& c) -> auto& { return c.validation.run.generator.min_skills; }));
    f.push_back(number_field("validation", "max_skills", [](AppConfig& c) -> auto& { return c.validation.run.generator.max_skills; }));
    f.push_back(number_field("validation", "label_sentences", [](AppConfig& c) -> auto& { return c.validation.run.generator.label_sentences; }));
    f.push_back(number_field("validation", "explicit_clauses", [](AppConfig& c) -> auto& { return c.validation.run.generator.explicit_clauses; }));
    f.push_back(number_field("validation", "alt_sentences", [](AppConfig& c) -> auto& { return c.validation.run.generator.alt_sentences; }));
    f.push_back(number_field("validation", "clause_repeats", [](AppConfig& c) -> auto& { return c.validation.run.generator.clause_repeats; }));
    f.push_back(string_field("service", "host", [](AppConfig& c) -> auto& { return c.service.host; }));
    f.push_back(number_field("service", "port", [](AppConfig& c) -> auto& { return c.service.port; }));
    f.push_back(string_field("service", "cors_origin", [](AppConfig& c) -> auto& { return c.service.cors_origin; }));
    f.push_back(number_field("service", "threads", [](AppConfig& c) -> auto& { return c.service.threads; }));
    f.push_back(string_field("paths", "skills", [](AppConfig& c) -> auto& { return c.paths.skills; }));
    f.push_back(string_field("paths", "occupations", [](AppConfig& c) -> auto& { return c.paths.occupations; }));
    f.push_back(string_field("paths", "courses", [](AppConfig& c) -> auto& { return c.paths.courses; }));
    f.push_back(string_field("paths", "sdgs", [](AppConfig& c) -> auto& { return c.paths.sdgs; }));
    f.push_back(string_field("paths", "skill_index", [](AppConfig& c) -> auto& { return c.paths.skill_index; }));
    f.push_back(string_field("paths", "course_index", [](AppConfig& c) -> auto& { return c.paths.course_index; }));
    f.push_back(string_field("paths", "embeddings", [](AppConfig& c) -> auto& { return c.paths.embeddings; }));
    return f;
  }();
  return kFields;
}

const Field* find_field(std::string_view section, std::string_view key) {
  for (const Field& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

// Strips surrounding double quotes and resolves \" and \\ escapes.
std::string unquote(std::string_view v, const std::string& origin) {
  if (v.size() < 2 || v.front() != '"') return std::string(v);
  if (v.back() != '"') throw Error(ErrorCode::ConfigError, origin + ": unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      ++i;
      out.push_back(v[i] == 'n' ? '\n' : v[i] == 't' ? '\t' : v[i]);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

// Drops a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

AppConfig::AppConfig() {
  const std::filesystem::path dir = default_data_dir();
  paths.skills = (dir / "skills.csv").string();
  paths.occupations = (dir / "occupations.csv").string();
  paths.courses = (dir / "courses.csv").string();
  paths.sdgs = (dir / "sdgs.csv").string();
}

void AppConfig::validate() const {
  prep.validate();
  embedding.validate();
  extraction.validate();
  mapping.validate();
  sdg_scorer.validate();
  if (validation.run.subset_size < 1) throw Error(ErrorCode::ConfigError, "validation.subset_size must be >= 1");
  if (validation.run.generator.min_skills < 1 || validation.run.generator.max_skills < validation.run.generator.min_skills) {
    throw Error(ErrorCode::ConfigError, "validation skill range must satisfy 1 <= min_skills <= max_skills");
  }
  if (service.port < 0 || service.port > 65535) throw Error(ErrorCode::ConfigError, "service.port must be in 0..65535");
  if (service.threads < 1) throw Error(ErrorCode::ConfigError, "service.threads must be >= 1");
}

nlohmann::ordered_json AppConfig::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Field& f : fields()) j[std::string(f.section)][std::string(f.key)] = f.get(*this);
  return j;
}

std::string AppConfig::to_text() const {
  std::ostringstream out;
  std::string_view current;
  for (const Field& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      current = f.section;
    }
    const nlohmann::ordered_json v = f.get(*this);
    out << f.key << " = ";
    if (v.is_string()) {
      out << quote(v.get<std::string>());
    } else if (v.is_array()) {
      std::vector<std::string> items;
      for (const auto& x : v) items.push_back(x.get<std::string>());
      out << quote(text::join(items, ", "));
    } else {
      out << v.dump();
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.push_back(std::string(f.section) + "." + std::string(f.key));
  return out;
}

void apply_setting(AppConfig& config, std::string_view section, std::string_view key, std::string_view value,
                   const std::string& origin) {
  const Field* f = find_field(section, key);
  if (!f) {
    throw Error(ErrorCode::ConfigError,
                origin + ": unknown setting '" + std::string(section) + "." + std::string(key) + "'");
  }
  f->set(config, text::trim(value), origin);
}

void apply_config_text(AppConfig& config, std::string_view text_in, const std::string& source) {
  std::string section;
  std::size_t line_no = 0;
  for (const std::string& raw : text::split(text::strip_utf8_bom(text_in), '\n')) {
    ++line_no;
    const std::string origin = source + ":" + std::to_string(line_no);
    const std::string_view line = text::trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ConfigError, origin + ": malformed section header");
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ConfigError, origin + ": expected key = value");
    if (section.empty()) throw Error(ErrorCode::ConfigError, origin + ": setting outside of a [section]");
    const std::string_view key = text::trim(line.substr(0, eq));
    const std::string value = unquote(text::trim(line.substr(eq + 1)), origin);
    apply_setting(config, section, key, value, origin);
  }
}

void apply_config_file(AppConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str(), path.string());
}

void apply_environment(AppConfig& config, const EnvLookup& lookup) {
  for (const Field& f : fields()) {
    std::string name = "SKILLMAP_" + std::string(f.section) + "_" + std::string(f.key);
    for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = lookup(name.c_str())) apply_setting(config, f.section, f.key, v, "environment " + name);
  }
}

void apply_override(AppConfig& config, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  const std::string_view lhs = text::trim(assignment.substr(0, eq));
  const std::size_t dot = lhs.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos) {
    throw Error(ErrorCode::ConfigError, "override '" + std::string(assignment) + "' must look like section.key=value");
  }
  apply_setting(config, lhs.substr(0, dot), lhs.substr(dot + 1), text::trim(assignment.substr(eq + 1)),
                "override " + std::string(lhs));
}

}  // namespace skillmap

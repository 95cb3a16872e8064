#include "skillmap/pipeline.hpp"

#include "skillmap/error.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <sstream>

namespace skillmap {

void check_input_files(const AppConfig& config) {
  const std::pair<const char*, const std::string*> inputs[] = {
      {"skills catalog", &config.paths.skills},     {"occupations catalog", &config.paths.occupations},
      {"courses catalog", &config.paths.courses},   {"SDG catalog", &config.paths.sdgs},
      {"skill index", &config.paths.skill_index},   {"course index", &config.paths.course_index},
      {"embedding store", &config.paths.embeddings}};
  for (const auto& [what, path] : inputs) {
    if (!path->empty() && !std::filesystem::is_regular_file(*path)) {
      throw Error(ErrorCode::IoError, std::string(what) + " not found: " + *path);
    }
  }
}

namespace {

VectorIndex load_checked_index(const std::string& path, std::size_t dim, const char* what) {
  VectorIndex index = load_index(path);
  if (index.dim() != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " " + path + " has dim " +
                                                  std::to_string(index.dim()) + ", embedder dim is " +
                                                  std::to_string(dim));
  }
  return index;
}

}  // namespace

std::shared_ptr<const AppState> load_app_state(const AppConfig& config) {
  config.validate();
  check_input_files(config);
  auto state = std::make_shared<AppState>();
  state->config = config;

  std::shared_ptr<const EmbeddingStore> store;
  if (!config.paths.embeddings.empty()) {
    store = std::make_shared<const EmbeddingStore>(load_embedding_store(config.paths.embeddings));
  }
  state->embedder = make_embedder(config.embedding, store);

  state->skills = load_skills(config.paths.skills);
  state->occupations = load_occupations(config.paths.occupations, state->skills);
  state->courses = load_courses(config.paths.courses);
  state->sdgs = load_sdgs(config.paths.sdgs);
  embed_occupations(state->occupations, *state->embedder);
  embed_sdgs(state->sdgs, *state->embedder);

  const std::size_t dim = state->embedder->dim();
  state->skill_index = config.paths.skill_index.empty()
                           ? build_skill_index(state->skills, *state->embedder)
                           : load_checked_index(config.paths.skill_index, dim, "skill index");
  state->course_index = config.paths.course_index.empty()
                            ? build_course_index(state->courses, *state->embedder)
                            : load_checked_index(config.paths.course_index, dim, "course index");
  return state;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

AnalysisResult analyze_document(const AppState& state, const RawDocument& doc) {
  const auto t0 = Clock::now();
  AnalysisResult result;
  result.document_name = doc.name;

  PrepConfig prep = state.config.prep;
  prep.chunk_size_limit = state.config.extraction.chunk_size_limit;
  auto t = Clock::now();
  const PreparedDocument prepared = prepare_document(doc, prep);
  result.timings.prep_ms = elapsed_ms(t);
  result.chunk_count = prepared.chunks.size();
  result.removed_artifact_count = prepared.clean.removed_artifact_count;

  t = Clock::now();
  result.profile = extract_skills_from_chunks(doc.name, prepared.chunks, state.skill_index,
                                              state.config.extraction, *state.embedder);
  result.timings.extraction_ms = elapsed_ms(t);

  t = Clock::now();
  const EmbeddingVector doc_vector = document_vector(prepared.chunks, *state.embedder);
  result.occupations = score_occupations(result.profile, doc_vector, state.occupations, state.config.mapping);
  if (!result.profile.matches.empty()) {
    result.courses = recommend_courses(result.profile, state.course_index, state.skill_index, state.config.mapping,
                                       *state.embedder);
  }
  result.timings.mapping_ms = elapsed_ms(t);

  t = Clock::now();
  result.sdgs = score_sdgs(doc_vector, state.sdgs);
  result.timings.sdg_ms = elapsed_ms(t);
  result.timings.total_ms = elapsed_ms(t0);
  return result;
}

nlohmann::ordered_json to_json(const AnalysisResult& r, const JsonOptions& options) {
  nlohmann::ordered_json j;
  j["document_name"] = r.document_name;
  j["chunk_count"] = r.chunk_count;
  auto skills = nlohmann::ordered_json::array();
  for (const auto& m : r.profile.matches) {
    skills.push_back({{"skill_id", m.skill_id},
                      {"label", m.label},
                      {"frequency", m.frequency},
                      {"max_score", m.max_score},
                      {"mean_score", m.mean_score}});
  }
  j["skills"] = std::move(skills);
  auto occupations = nlohmann::ordered_json::array();
  for (const auto& o : r.occupations) {
    occupations.push_back({{"occupation_id", o.occupation_id},
                           {"title", o.title},
                           {"overlap_ratio", o.overlap_ratio},
                           {"text_similarity", o.text_similarity},
                           {"combined", o.combined},
                           {"matched_skill_ids", o.matched_skill_ids}});
  }
  j["occupations"] = std::move(occupations);
  auto courses = nlohmann::ordered_json::array();
  for (const auto& c : r.courses) {
    courses.push_back({{"course_id", c.course_id},
                       {"title", c.title},
                       {"score", c.score},
                       {"matched_skill_ids", c.matched_skill_ids}});
  }
  j["courses"] = std::move(courses);
  auto sdgs = nlohmann::ordered_json::array();
  for (const auto& s : r.sdgs) sdgs.push_back({{"sdg_id", s.sdg_id}, {"name", s.name}, {"relevance", s.relevance}});
  j["sdgs"] = std::move(sdgs);
  if (options.timings) {
    j["timings"] = {{"prep_ms", r.timings.prep_ms},
                    {"extraction_ms", r.timings.extraction_ms},
                    {"mapping_ms", r.timings.mapping_ms},
                    {"sdg_ms", r.timings.sdg_ms},
                    {"total_ms", r.timings.total_ms}};
  }
  if (options.debug) {
    auto dropped = nlohmann::ordered_json::array();
    for (const auto& d : r.profile.dropped) {
      dropped.push_back({{"skill_id", d.skill_id}, {"kept_skill_id", d.kept_skill_id}, {"similarity", d.similarity}});
    }
    j["debug"] = {{"removed_artifact_count", r.removed_artifact_count}, {"dropped_near_duplicates", std::move(dropped)}};
  }
  return j;
}

namespace {

std::string clip(const std::string& s, std::size_t width) {
  if (s.size() <= width) return s;
  return s.substr(0, width - 3) + "...";
}

}  // namespace

std::string render_tables(const AnalysisResult& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "document: " << r.document_name << "  chunks: " << r.chunk_count << "\n\n";

  out << "SKILLS\n" << std::left << std::setw(8) << "id" << std::setw(42) << "label" << std::right << std::setw(6)
      << "freq" << std::setw(10) << "max" << std::setw(10) << "mean" << '\n';
  for (const auto& m : r.profile.matches) {
    out << std::left << std::setw(8) << m.skill_id << std::setw(42) << clip(m.label, 40) << std::right
        << std::setw(6) << m.frequency << std::setw(10) << m.max_score << std::setw(10) << m.mean_score << '\n';
  }
  if (r.profile.matches.empty()) out << "(no skills above threshold)\n";

  out << "\nOCCUPATIONS\n" << std::left << std::setw(8) << "id" << std::setw(42) << "title" << std::right
      << std::setw(10) << "rho" << std::setw(10) << "sigma" << std::setw(10) << "combined" << '\n';
  for (const auto& o : r.occupations) {
    out << std::left << std::setw(8) << o.occupation_id << std::setw(42) << clip(o.title, 40) << std::right
        << std::setw(10) << o.overlap_ratio << std::setw(10) << o.text_similarity << std::setw(10) << o.combined
        << '\n';
  }

  out << "\nCOURSES\n" << std::left << std::setw(8) << "id" << std::setw(42) << "title" << std::right
      << std::setw(10) << "score" << "  matched skills\n";
  for (const auto& c : r.courses) {
    std::string matched;
    for (const auto& id : c.matched_skill_ids) matched += (matched.empty() ? "" : ",") + id;
    out << std::left << std::setw(8) << c.course_id << std::setw(42) << clip(c.title, 40) << std::right
        << std::setw(10) << c.score << "  " << matched << '\n';
  }
  if (r.courses.empty()) out << "(no courses above threshold)\n";

  out << "\nSDGS\n" << std::left << std::setw(6) << "goal" << std::setw(46) << "name" << std::right << std::setw(10)
      << "relevance" << '\n';
  for (const auto& s : r.sdgs) {
    out << std::left << std::setw(6) << s.sdg_id << std::setw(46) << clip(s.name, 44) << std::right << std::setw(10)
        << s.relevance << '\n';
  }
  return out.str();
}

}  // namespace skillmap

#include "skillmap/validation.hpp"

#include "skillmap/error.hpp"

#include <iomanip>
#include <sstream>

namespace skillmap {

namespace {

nlohmann::ordered_json metrics_json(const MetricsReport& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["config_echo"] = config_echo;
  j["per_kind"] = {{"explicit", metrics_json(explicit_metrics)}, {"implicit", metrics_json(implicit_metrics)}};
  j["overall"] = metrics_json(overall);
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : documents) {
    docs.push_back({{"name", d.name},
                    {"kind", std::string(to_string(d.kind))},
                    {"truth", d.truth},
                    {"predicted", d.predicted},
                    {"tp", d.counts.tp},
                    {"fp", d.counts.fp},
                    {"fn", d.counts.fn}});
  }
  j["per_document"] = std::move(docs);
  j["warnings"] = warnings;
  return j;
}

std::string ValidationReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(10) << "kind" << std::right << std::setw(11) << "precision" << std::setw(10)
      << "recall" << std::setw(10) << "f1" << std::setw(7) << "tp" << std::setw(7) << "fp" << std::setw(7) << "fn"
      << '\n';
  const auto row = [&](const char* name, const MetricsReport& m) {
    out << std::left << std::setw(10) << name << std::right << std::fixed << std::setprecision(4) << std::setw(11)
        << m.precision << std::setw(10) << m.recall << std::setw(10) << m.f1 << std::setw(7) << m.tp << std::setw(7)
        << m.fp << std::setw(7) << m.fn << '\n';
  };
  row("explicit", explicit_metrics);
  row("implicit", implicit_metrics);
  row("overall", overall);
  return out.str();
}

void finalize_report(ValidationReport& report) {
  std::vector<MatchCounts> ex, im, all;
  for (const auto& d : report.documents) {
    (d.kind == DocKind::explicit_mention ? ex : im).push_back(d.counts);
    all.push_back(d.counts);
  }
  report.explicit_metrics = aggregate_metrics(ex);
  report.implicit_metrics = aggregate_metrics(im);
  report.overall = aggregate_metrics(all);
}

namespace {

nlohmann::ordered_json generator_echo(const ValidationConfig& config) {
  const GeneratorOptions& g = config.generator;
  return {{"documents", g.count},
          {"min_skills", g.min_skills},
          {"max_skills", g.max_skills},
          {"label_sentences", g.label_sentences},
          {"explicit_clauses", g.explicit_clauses},
          {"alt_sentences", g.alt_sentences},
          {"clause_repeats", g.clause_repeats}};
}

}  // namespace

ValidationReport run_skills_validation(const SkillCatalog& catalog, const PrepConfig& prep,
                                       const ExtractionConfig& extraction, const Embedder& embedder,
                                       std::uint64_t seed, const ValidationConfig& config) {
  extraction.validate();
  const std::vector<std::string> subset_ids = select_skill_subset(catalog, config.subset_size, seed);
  std::vector<Skill> subset_skills;
  for (const auto& id : subset_ids) subset_skills.push_back(*catalog.find(id));
  const SkillCatalog subset(std::move(subset_skills));
  const VectorIndex index = build_skill_index(subset, embedder);

  ValidationReport report;
  report.suite = "skills";
  report.seed = seed;
  report.config_echo = {{"subset_size", config.subset_size},
                        {"tau", extraction.tau},
                        {"chunk_size_limit", extraction.chunk_size_limit},
                        {"dedup_similarity", extraction.dedup_similarity},
                        {"max_skills", extraction.max_skills},
                        {"embedder_dim", embedder.dim()},
                        {"generator", generator_echo(config)}};

  if (config.generator.count > 0) {
    GeneratedCorpus corpus = generate_test_documents(subset, subset_ids, seed, config.generator);
    report.warnings = std::move(corpus.warnings);
    for (const TestDocument& doc : corpus.documents) {
      const RawDocument raw{doc.name, DocumentFormat::txt, doc.text};
      const SkillProfile profile = extract_skills(raw, prep, index, extraction, embedder);
      DocumentOutcome outcome;
      outcome.name = doc.name;
      outcome.kind = doc.kind;
      outcome.truth = doc.ground_truth_ids;
      for (const auto& m : profile.matches) outcome.predicted.push_back(m.skill_id);
      std::sort(outcome.predicted.begin(), outcome.predicted.end());
      outcome.counts = compare_sets(outcome.predicted, outcome.truth);
      report.documents.push_back(std::move(outcome));
    }
  }
  finalize_report(report);
  return report;
}

ValidationReport run_sdg_validation(const std::vector<SdgEntry>& sdgs, const SdgScorerConfig& scorer_config,
                                    const Embedder& embedder, std::uint64_t seed, const ValidationConfig& config) {
  std::vector<SdgEntry> goals = sdgs;
  for (auto& g : goals) {
    if (g.vector.values.empty()) g.vector = embedder.embed_item("SDG" + std::to_string(g.id), g.embed_text());
  }
  const SdgScorer scorer(goals, scorer_config);

  ValidationReport report;
  report.suite = "sdg";
  report.seed = seed;
  report.config_echo = {{"w_seq", scorer_config.w_seq},
                        {"w_term", scorer_config.w_term},
                        {"w_sem", scorer_config.w_sem},
                        {"explicit_threshold", scorer_config.explicit_threshold},
                        {"implicit_threshold", scorer_config.implicit_threshold},
                        {"embedder_dim", embedder.dim()},
                        {"documents", config.generator.count}};

  if (config.generator.count > 0) {
    GeneratedCorpus corpus = generate_sdg_documents(goals, seed, config.generator.count);
    report.warnings = std::move(corpus.warnings);
    for (const TestDocument& doc : corpus.documents) {
      const double threshold = doc.kind == DocKind::explicit_mention ? scorer_config.explicit_threshold
                                                                      : scorer_config.implicit_threshold;
      const std::vector<SdgComponents> scores = scorer.score_all(doc.text, embedder);
      DocumentOutcome outcome;
      outcome.name = doc.name;
      outcome.kind = doc.kind;
      outcome.truth = doc.ground_truth_ids;
      for (std::size_t g = 0; g < goals.size(); ++g) {
        if (scores[g].score > threshold) outcome.predicted.push_back(std::to_string(goals[g].id));
      }
      std::sort(outcome.predicted.begin(), outcome.predicted.end());
      outcome.counts = compare_sets(outcome.predicted, outcome.truth);
      report.documents.push_back(std::move(outcome));
    }
  }
  finalize_report(report);
  return report;
}

std::string render_report_chart(const ValidationReport& report) {
  constexpr int kWidth = 520;
  constexpr int kHeight = 300;
  constexpr int kPlotTop = 30;
  constexpr int kPlotBottom = 250;
  constexpr int kBarWidth = 36;
  const char* colors[] = {"#4e79a7", "#f28e2b", "#59a14f"};
  const char* metric_names[] = {"precision", "recall", "f1"};

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(4);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  svg << "<line x1=\"40\" y1=\"" << kPlotBottom << "\" x2=\"" << kWidth - 10 << "\" y2=\"" << kPlotBottom
      << "\" stroke=\"#333\"/>\n";
  const std::pair<const char*, const MetricsReport*> groups[] = {
      {"explicit", &report.explicit_metrics}, {"implicit", &report.implicit_metrics}, {"overall", &report.overall}};
  int x = 60;
  for (const auto& [name, m] : groups) {
    const double values[] = {m->precision, m->recall, m->f1};
    for (int k = 0; k < 3; ++k) {
      const double h = values[k] * (kPlotBottom - kPlotTop);
      svg << "<rect x=\"" << x + k * (kBarWidth + 4) << "\" y=\"" << kPlotBottom - h << "\" width=\"" << kBarWidth
          << "\" height=\"" << h << "\" fill=\"" << colors[k] << "\"><title>" << name << ' ' << metric_names[k]
          << ' ' << values[k] << "</title></rect>\n";
      svg << "<text x=\"" << x + k * (kBarWidth + 4) + kBarWidth / 2 << "\" y=\"" << kPlotBottom - h - 4
          << "\" font-size=\"10\" text-anchor=\"middle\">" << std::setprecision(2) << values[k]
          << std::setprecision(4) << "</text>\n";
    }
    svg << "<text x=\"" << x + (3 * kBarWidth + 8) / 2 << "\" y=\"" << kPlotBottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << name << "</text>\n";
    x += 3 * kBarWidth + 40;
  }
  for (int k = 0; k < 3; ++k) {
    svg << "<rect x=\"" << 60 + k * 90 << "\" y=\"" << kHeight - 22 << "\" width=\"10\" height=\"10\" fill=\""
        << colors[k] << "\"/><text x=\"" << 74 + k * 90 << "\" y=\"" << kHeight - 13 << "\" font-size=\"11\">"
        << metric_names[k] << "</text>\n";
  }
  svg << "</svg>\n";

  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << report.suite
       << " validation</title></head>\n<body>\n<h1>" << report.suite << " validation (seed " << report.seed
       << ")</h1>\n" << svg.str() << "</body></html>\n";
  return html.str();
}

}  // namespace skillmap

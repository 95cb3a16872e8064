#include "skillmap/corpus.hpp"

#include "skillmap/error.hpp"
#include "skillmap/random.hpp"
#include "skillmap/text_util.hpp"
#include "skillmap/verb_object.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

namespace skillmap {

std::string_view to_string(DocKind kind) noexcept {
  return kind == DocKind::explicit_mention ? "explicit" : "implicit";
}

std::string_view to_string(DocTarget target) noexcept { return target == DocTarget::skills ? "skills" : "sdg"; }

std::vector<std::string> select_skill_subset(const SkillCatalog& catalog, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::CatalogTooSmall, "subset size must be >= 1");
  if (catalog.size() < n) {
    throw Error(ErrorCode::CatalogTooSmall, "catalog has " + std::to_string(catalog.size()) +
                                                " skills, subset needs " + std::to_string(n));
  }
  const auto& skills = catalog.skills();
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  if (!catalog.has_categories()) {
    std::vector<std::size_t> all(skills.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    chosen = rng.sample(std::move(all), n);
  } else {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < skills.size(); ++i) groups[skills[i].category].push_back(i);
    struct Quota {
      const std::string* category;
      std::size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [cat, members] : groups) {
      const double exact = static_cast<double>(n) * static_cast<double>(members.size()) /
                           static_cast<double>(skills.size());
      const auto take = static_cast<std::size_t>(exact);
      quotas.push_back({&cat, take, exact - static_cast<double>(take)});
      assigned += take;
    }
    std::vector<std::size_t> order(quotas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
    for (std::size_t r = 0; assigned < n; r = (r + 1) % order.size()) {
      Quota& q = quotas[order[r]];
      if (q.take < groups[*q.category].size()) {
        ++q.take;
        ++assigned;
      }
    }
    for (const Quota& q : quotas) {
      auto picked = rng.sample(groups[*q.category], q.take);
      chosen.insert(chosen.end(), picked.begin(), picked.end());
    }
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::string> ids;
  ids.reserve(chosen.size());
  for (std::size_t i : chosen) ids.push_back(skills[i].id);
  return ids;
}

namespace {

const std::vector<std::string> kLabelTemplates = {
    "Our group depends on {}.",     "Strong {} is essential here.",   "We expect proven {}.",
    "Daily routines involve {}.",   "Applicants must demonstrate {}.", "This unit values {}.",
    "Further training covers {}.",  "Annual reviews assess {}.",      "Much emphasis falls on {}.",
    "Colleagues rely upon {}.",     "Success requires {}.",           "Hiring panels look for {}.",
    "Every project draws on {}.",   "Managers reward {}.",            "Induction introduces {}."};

const std::vector<std::string> kProgressiveTemplates = {
    "Staff will be {}.",      "Proficient in {}.",  "Experience {} helps.", "Comfortable {}.",
    "Responsible for {}.",    "Regularly {}.",      "Skilled at {}.",       "Often {}."};

const std::vector<std::string> kBaseTemplates = {
    "Able to {}.",  "Expected to {}.", "Must {}.",   "Will {}.",
    "Can {}.",      "Should {}.",      "Asked to {}.", "Helps {}."};

const std::vector<std::string> kKeywordTemplates = {
    "Programmes in this area address {} and {}.",
    "The plan commits funding to {} alongside {}.",
    "Partners report progress on {} as well as {}.",
    "Local authorities prioritise {} together with {}.",
    "New indicators track {} and {}.",
    "Investment decisions weigh {} against {}.",
    "Pilot schemes tested {} plus {}.",
    "Stakeholders asked for attention to {} and {}."};

// General policy context shared by many goals; names no goal.
const std::vector<std::string> kContextSentences = {
    "The programme forms part of the national strategy for sustainable development.",
    "Delivery depends on cooperation between public authorities, businesses and civil society.",
    "Funding combines public budgets with private investment and international support.",
    "Local communities were consulted during the design of every measure.",
    "Progress will be reviewed each year against agreed indicators.",
    "The measures aim to strengthen resilience and long term economic growth.",
    "Vulnerable groups should benefit first from the planned investments.",
    "Regional agencies will share data and technology with partner countries.",
    "Implementation follows the principle that no one is left behind.",
    "Municipal and rural areas receive dedicated support within the plan."};

std::string format_template(const std::string& tmpl, std::string_view a) {
  std::string out = tmpl;
  const auto at = out.find("{}");
  out.replace(at, 2, a);
  return out;
}

std::string format_template(const std::string& tmpl, std::string_view a, std::string_view b) {
  return format_template(format_template(tmpl, a), b);
}

std::string as_sentence(std::string_view s) {
  std::string out(text::trim(s));
  if (!out.empty() && out.back() != '.' && out.back() != '!' && out.back() != '?') out += '.';
  return out;
}

std::string doc_name(std::string_view prefix, DocKind kind, std::size_t n) {
  std::ostringstream ss;
  ss << prefix << '_' << to_string(kind) << '_' << std::setw(2) << std::setfill('0') << n;
  return ss.str();
}

bool mentions_any(std::string_view sentence, const std::vector<std::string>& phrases) {
  return std::any_of(phrases.begin(), phrases.end(),
                     [&](const std::string& p) { return text::contains_ci(sentence, p); });
}

}  // namespace

std::vector<std::string> usable_alt_labels(const Skill& skill) {
  std::vector<std::string> out;
  for (const auto& a : skill.alt_labels) {
    if (!text::contains_ci(a, skill.label)) out.push_back(a);
  }
  return out;
}

GeneratedCorpus generate_test_documents(const SkillCatalog& catalog, const std::vector<std::string>& skill_ids,
                                        std::uint64_t seed, const GeneratorOptions& options) {
  if (skill_ids.empty()) throw Error(ErrorCode::InvalidArgument, "generator needs at least one skill id");
  if (options.min_skills < 1 || options.max_skills < options.min_skills) {
    throw Error(ErrorCode::InvalidArgument, "generator skill range must satisfy 1 <= min <= max");
  }
  for (const auto& id : skill_ids) {
    if (!catalog.find(id)) throw Error(ErrorCode::InvalidArgument, "unknown skill id '" + id + "'");
  }

  GeneratedCorpus corpus;
  Rng rng(seed);
  const std::size_t explicit_count = options.count / 2;
  std::vector<bool> warned(skill_ids.size(), false);

  for (std::size_t d = 0; d < options.count; ++d) {
    const DocKind kind = d < explicit_count ? DocKind::explicit_mention : DocKind::implicit_mention;
    Deck<std::string> labels(rng, kLabelTemplates);
    Deck<std::string> progressive(rng, kProgressiveTemplates);
    Deck<std::string> base(rng, kBaseTemplates);

    const auto k = static_cast<std::size_t>(rng.between(options.min_skills, options.max_skills));
    std::vector<std::size_t> order(skill_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    order = rng.sample(std::move(order), order.size());

    std::vector<const Skill*> truth;
    for (std::size_t i : order) {
      if (truth.size() == k) break;
      const Skill* s = catalog.find(skill_ids[i]);
      if (kind == DocKind::implicit_mention &&
          (usable_alt_labels(*s).empty() || description_clauses(s->description).empty())) {
        if (!warned[i]) {
          corpus.warnings.push_back("MissingAltLabels: skill " + s->id +
                                    " has no alternative label or description to paraphrase; skipped");
          warned[i] = true;
        }
        continue;
      }
      truth.push_back(s);
    }
    if (truth.empty()) {
      throw Error(ErrorCode::MissingAltLabels, "no selected skill can be paraphrased for implicit documents");
    }

    std::vector<std::string> truth_labels;
    for (const Skill* s : truth) truth_labels.push_back(s->label);

    std::vector<std::string> sections;
    for (const Skill* s : truth) {
      const std::vector<std::string> alts = usable_alt_labels(*s);
      const std::vector<VerbObject> clauses = description_clauses(s->description);
      std::vector<std::string> sentences;
      if (kind == DocKind::explicit_mention) {
        for (std::size_t r = 0; r < options.label_sentences; ++r) sentences.push_back(format_template(labels.draw(), s->label));
        if (!s->description.empty()) sentences.push_back(as_sentence(s->description));
        for (const auto& a : alts) sentences.push_back(format_template(labels.draw(), a));
        for (std::size_t c = 0; c < clauses.size() && c < options.explicit_clauses; ++c) {
          sentences.push_back(format_template(base.draw(), clauses[c].verb + " " + clauses[c].object));
        }
      } else {
        for (const auto& a : alts) {
          for (std::size_t r = 0; r < options.alt_sentences; ++r) sentences.push_back(format_template(labels.draw(), a));
        }
        for (const auto& c : clauses) {
          sentences.push_back(format_template(progressive.draw(), ing_form(c.verb) + " " + c.object));
          for (std::size_t r = 0; r < options.clause_repeats; ++r) {
            sentences.push_back(format_template(base.draw(), c.verb + " " + c.object));
          }
        }
        std::erase_if(sentences, [&](const std::string& x) { return mentions_any(x, truth_labels); });
      }
      if (!sentences.empty()) sections.push_back(text::join(sentences, " "));
    }

    TestDocument doc;
    doc.kind = kind;
    doc.target = DocTarget::skills;
    doc.name = doc_name("skills", kind, kind == DocKind::explicit_mention ? d + 1 : d - explicit_count + 1);
    doc.text = text::join(sections, "\n\n");
    for (const Skill* s : truth) doc.ground_truth_ids.push_back(s->id);
    std::sort(doc.ground_truth_ids.begin(), doc.ground_truth_ids.end());
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

GeneratedCorpus generate_sdg_documents(const std::vector<SdgEntry>& sdgs, std::uint64_t seed, std::size_t count) {
  if (sdgs.empty()) throw Error(ErrorCode::InvalidArgument, "SDG generator needs the goal catalog");
  GeneratedCorpus corpus;
  Rng rng(seed);
  const std::size_t explicit_count = count / 2;
  for (std::size_t d = 0; d < count; ++d) {
    const DocKind kind = d < explicit_count ? DocKind::explicit_mention : DocKind::implicit_mention;
    Deck<std::string> templates(rng, kKeywordTemplates);
    Deck<std::string> context(rng, kContextSentences);
    const auto k = static_cast<std::size_t>(rng.between(1, 3));
    std::vector<std::size_t> order(sdgs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::vector<std::size_t> picked = rng.sample(std::move(order), k);

    std::vector<std::string> names;
    for (std::size_t i : picked) names.push_back(sdgs[i].name);

    std::vector<std::string> sections;
    TestDocument doc;
    for (std::size_t i : picked) {
      const SdgEntry& g = sdgs[i];
      if (g.keywords.size() < 2) {
        corpus.warnings.push_back("SDG " + std::to_string(g.id) + " has fewer than two keywords");
      }
      Deck<std::string> keywords(rng, g.keywords.empty() ? std::vector<std::string>{g.name} : g.keywords);
      std::vector<std::string> sentences;
      const std::size_t n_sentences = kind == DocKind::explicit_mention ? 3 : 4;
      for (std::size_t r = 0; r < n_sentences; ++r) {
        const std::string a = keywords.draw();
        const std::string b = keywords.draw();
        sentences.push_back(format_template(templates.draw(), a, b));
      }
      if (kind == DocKind::implicit_mention) {
        std::erase_if(sentences, [&](const std::string& x) { return mentions_any(x, names); });
      }
      std::string section = kind == DocKind::explicit_mention ? g.name + "\n" : std::string();
      section += text::join(sentences, " ");
      sections.push_back(std::move(section));
      doc.ground_truth_ids.push_back(std::to_string(g.id));
    }
    sections.push_back(context.draw() + " " + context.draw());
    doc.kind = kind;
    doc.target = DocTarget::sdg;
    doc.name = doc_name("sdg", kind, kind == DocKind::explicit_mention ? d + 1 : d - explicit_count + 1);
    doc.text = text::join(sections, "\n\n");
    std::sort(doc.ground_truth_ids.begin(), doc.ground_truth_ids.end());
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace skillmap

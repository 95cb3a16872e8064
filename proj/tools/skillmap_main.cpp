// skillmap command-line front end: index building, document analysis,
// validation suites, the HTTP service and config inspection.

#include "skillmap/catalog.hpp"
#include "skillmap/config.hpp"
#include "skillmap/error.hpp"
#include "skillmap/pipeline.hpp"
#include "skillmap/service.hpp"
#include "skillmap/validation.hpp"
#include "skillmap/vindex.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace {

using namespace skillmap;

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kIoError = 3 };

struct GlobalFlags {
  std::string config_file;
  std::string skills, occupations, courses, sdgs;
  std::string skill_index, course_index, embeddings;
  std::vector<std::string> overrides;
};

void add_catalog_flags(CLI::App& cmd, GlobalFlags& g) {
  cmd.add_option("--config", g.config_file, "Config file (section/key = value)");
  cmd.add_option("--occupations", g.occupations, "Occupations catalog CSV");
  cmd.add_option("--sdgs", g.sdgs, "SDG catalog CSV");
  cmd.add_option("--skill-index", g.skill_index, "Prebuilt skill index (VIDX)");
  cmd.add_option("--course-index", g.course_index, "Prebuilt course index (VIDX)");
  cmd.add_option("--embeddings", g.embeddings, "EmbeddingStore for embedding.kind = precomputed");
  cmd.add_option("--set", g.overrides, "Override a setting, section.key=value (repeatable)");
}

// defaults < file < environment < flags
AppConfig resolve_config(const GlobalFlags& g) {
  AppConfig config;
  if (!g.config_file.empty()) apply_config_file(config, g.config_file);
  apply_environment(config, [](const char* name) { return std::getenv(name); });
  auto set_path = [](std::string& field, const std::string& value) {
    if (!value.empty()) field = value;
  };
  set_path(config.paths.skills, g.skills);
  set_path(config.paths.occupations, g.occupations);
  set_path(config.paths.courses, g.courses);
  set_path(config.paths.sdgs, g.sdgs);
  set_path(config.paths.skill_index, g.skill_index);
  set_path(config.paths.course_index, g.course_index);
  set_path(config.paths.embeddings, g.embeddings);
  for (const auto& o : g.overrides) apply_override(config, o);
  config.validate();
  return config;
}

std::shared_ptr<CachedEmbedder> embedder_for(const AppConfig& config) {
  std::shared_ptr<const EmbeddingStore> store;
  if (!config.paths.embeddings.empty()) {
    store = std::make_shared<const EmbeddingStore>(load_embedding_store(config.paths.embeddings));
  }
  return make_embedder(config.embedding, store);
}

int report(const Error& e, int code) {
  std::cerr << "skillmap: " << to_string(e.code()) << ": " << e.what() << '\n';
  return code;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::OversizeDocument:
    case ErrorCode::EncodingError:
    case ErrorCode::FormatMismatch:
    case ErrorCode::MalformedMarkup:
    case ErrorCode::EmptyDocument:
    case ErrorCode::EmptyInput:
      return true;
    default:
      return false;
  }
}

// ---- index build ----------------------------------------------------------

struct IndexFlags {
  std::string skills, courses, out, embeddings;
  GlobalFlags global;
};

int run_index_build(const IndexFlags& f) {
  AppConfig config;
  try {
    GlobalFlags g = f.global;
    g.embeddings = f.embeddings;
    config = resolve_config(g);
  } catch (const Error& e) {
    return report(e, kInputError);
  }
  try {
    auto embedder = embedder_for(config);
    VectorIndex index;
    std::string what;
    if (!f.skills.empty()) {
      index = build_skill_index(load_skills(f.skills), *embedder);
      what = "skills";
    } else {
      index = build_course_index(load_courses(f.courses), *embedder);
      what = "courses";
    }
    save_index(index, f.out);
    std::cout << "indexed " << index.size() << ' ' << what << ", dim " << index.dim() << " -> " << f.out << '\n';
    return kOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) return report(e, kIoError);
    if (e.code() == ErrorCode::CatalogError || e.code() == ErrorCode::DuplicateId ||
        e.code() == ErrorCode::EmptyCatalog) {
      return report(e, kInputError);
    }
    return report(e, kFailure);
  }
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeFlags {
  std::string file;
  std::string output = "json";
  std::string input_format;
  bool timings = false;
  bool debug = false;
  GlobalFlags global;
};

int run_analyze(const AnalyzeFlags& f) {
  RawDocument doc;
  doc.name = std::filesystem::path(f.file).filename().string();
  {
    std::ifstream in(f.file, std::ios::binary);
    if (!in) {
      std::cerr << "skillmap: IoError: cannot open " << f.file << '\n';
      return kInputError;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    doc.bytes = ss.str();
  }
  if (!f.input_format.empty()) {
    auto fmt = parse_document_format(f.input_format);
    if (!fmt) {
      std::cerr << "skillmap: UnsupportedFormat: unknown input format '" << f.input_format << "'\n";
      return kInputError;
    }
    doc.declared_format = *fmt;
  } else {
    doc.declared_format = format_from_filename(doc.name).value_or(DocumentFormat::txt);
  }

  std::shared_ptr<const AppState> state;
  try {
    state = load_app_state(resolve_config(f.global));
  } catch (const Error& e) {
    return report(e, e.code() == ErrorCode::IoError ? kIoError : kInputError);
  }
  try {
    const AnalysisResult result = analyze_document(*state, doc);
    if (f.output == "table") {
      std::cout << render_tables(result);
    } else {
      std::cout << to_json(result, {.timings = f.timings, .debug = f.debug}).dump(2) << '\n';
    }
    return kOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyDocument) {
      std::cerr << "skillmap: empty document: " << e.what() << '\n';
      return kInputError;
    }
    return report(e, is_input_error(e.code()) ? kInputError : kFailure);
  }
}

// ---- validate -------------------------------------------------------------

struct Assertion {
  std::string metric;
  std::string op;
  double bound = 0.0;
};

Assertion parse_assertion(const std::string& text) {
  for (const char* op : {">=", "<=", ">", "<"}) {
    const auto at = text.find(op);
    if (at == std::string::npos) continue;
    Assertion a{text.substr(0, at), op, 0.0};
    const std::string rhs = text.substr(at + std::string_view(op).size());
    std::size_t used = 0;
    try {
      a.bound = std::stod(rhs, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rhs.size()) break;
    return a;
  }
  throw Error(ErrorCode::InvalidArgument, "assertion must look like overall_f1>=0.8, got '" + text + "'");
}

double metric_value(const ValidationReport& r, const std::string& name) {
  const auto us = name.find('_');
  if (us == std::string::npos) throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
  const std::string kind = name.substr(0, us);
  const std::string stat = name.substr(us + 1);
  const MetricsReport* m = kind == "explicit"   ? &r.explicit_metrics
                           : kind == "implicit" ? &r.implicit_metrics
                           : kind == "overall"  ? &r.overall
                                                : nullptr;
  if (m) {
    if (stat == "precision") return m->precision;
    if (stat == "recall") return m->recall;
    if (stat == "f1") return m->f1;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown metric '" + name + "' (use explicit|implicit|overall _ precision|recall|f1)");
}

bool holds(double v, const Assertion& a) {
  if (a.op == ">=") return v >= a.bound;
  if (a.op == "<=") return v <= a.bound;
  if (a.op == ">") return v > a.bound;
  return v < a.bound;
}

struct ValidateFlags {
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::string report_path;
  std::string chart_path;
  std::vector<std::string> asserts;
  GlobalFlags global;
};

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

int run_validate(const ValidateFlags& f) {
  std::vector<Assertion> assertions;
  ValidationReport report_data;
  try {
    for (const auto& a : f.asserts) assertions.push_back(parse_assertion(a));
    const AppConfig config = resolve_config(f.global);
    const std::uint64_t seed = f.seed.value_or(config.validation.seed);
    auto embedder = embedder_for(config);
    if (f.suite == "skills") {
      report_data = run_skills_validation(load_skills(config.paths.skills), config.prep, config.extraction,
                                          *embedder, seed, config.validation.run);
    } else {
      auto sdgs = load_sdgs(config.paths.sdgs);
      report_data = run_sdg_validation(sdgs, config.sdg_scorer, *embedder, seed, config.validation.run);
    }
  } catch (const Error& e) {
    return report(e, kInputError);
  }

  std::cout << report_data.to_table();
  for (const auto& w : report_data.warnings) std::cerr << "warning: " << w << '\n';
  if (!f.report_path.empty() && !write_file(f.report_path, report_data.to_json().dump(2) + "\n")) {
    std::cerr << "skillmap: IoError: cannot write " << f.report_path << '\n';
    return kIoError;
  }
  if (!f.chart_path.empty() && !write_file(f.chart_path, render_report_chart(report_data))) {
    std::cerr << "skillmap: IoError: cannot write " << f.chart_path << '\n';
    return kIoError;
  }

  int rc = kOk;
  for (const auto& a : assertions) {
    double v = 0.0;
    try {
      v = metric_value(report_data, a.metric);
    } catch (const Error& e) {
      return report(e, kInputError);
    }
    if (!holds(v, a)) {
      std::cerr << "assertion failed: " << a.metric << " = " << v << ", required " << a.op << ' ' << a.bound << '\n';
      rc = kFailure;
    }
  }
  return rc;
}

// ---- serve ----------------------------------------------------------------

struct ServeFlags {
  std::optional<int> port;
  std::string host;
  GlobalFlags global;
};

int run_serve(const ServeFlags& f) {
  AppConfig config;
  try {
    config = resolve_config(f.global);
    if (f.port) config.service.port = *f.port;
    if (!f.host.empty()) config.service.host = f.host;
    config.validate();
    check_input_files(config);
  } catch (const Error& e) {
    return report(e, e.code() == ErrorCode::IoError ? kIoError : kInputError);
  }

  // Signals are taken synchronously by a dedicated thread; every other thread
  // inherits the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(config);
  const int port = service.bind(config.service.host, config.service.port);
  if (port < 0) {
    std::cerr << "skillmap: IoError: cannot bind " << config.service.host << ':' << config.service.port << '\n';
    return kIoError;
  }
  std::cout << "listening on http://" << config.service.host << ':' << port << std::endl;

  std::atomic<bool> load_failed{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.load_async();
  std::thread watcher([&] {
    service.wait_loaded();
    if (!service.ready()) {
      std::cerr << "skillmap: startup failed: " << service.load_error() << '\n';
      load_failed = true;
      pthread_kill(waiter.native_handle(), SIGTERM);
    }
  });

  service.run();
  // run() also returns if the listener fails; release the signal thread.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  watcher.join();
  return load_failed ? kIoError : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skillmap: skill extraction and mapping for unstructured documents"};
  app.require_subcommand(1);

  // index build
  IndexFlags index_flags;
  auto* index_cmd = app.add_subcommand("index", "Build vector index files");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Embed a catalog and write a VIDX index");
  auto* opt_skills = build_cmd->add_option("--skills", index_flags.skills, "Skills catalog CSV");
  auto* opt_courses = build_cmd->add_option("--courses", index_flags.courses, "Courses catalog CSV");
  opt_skills->excludes(opt_courses);
  build_cmd->add_option("--out", index_flags.out, "Output index path")->required();
  build_cmd->add_option("--embeddings", index_flags.embeddings, "EmbeddingStore for embedding.kind = precomputed");
  build_cmd->add_option("--config", index_flags.global.config_file, "Config file");
  build_cmd->add_option("--set", index_flags.global.overrides, "Override a setting, section.key=value");
  build_cmd->callback([&] {
    if (index_flags.skills.empty() && index_flags.courses.empty()) {
      throw CLI::ValidationError("index build", "one of --skills or --courses is required");
    }
  });

  // analyze
  AnalyzeFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one document");
  analyze_cmd->add_option("file", analyze_flags.file, "Document path")->required();
  analyze_cmd->add_option("--format", analyze_flags.output, "Output format")
      ->check(CLI::IsMember({"json", "table"}));
  analyze_cmd->add_option("--input-format", analyze_flags.input_format,
                          "txt|html|xml|pre_extracted (default: from the file extension)");
  analyze_cmd->add_flag("--timings", analyze_flags.timings, "Include per-stage timings in JSON output");
  analyze_cmd->add_flag("--debug", analyze_flags.debug, "Include dropped near-duplicates and cleaning counts");
  analyze_cmd->add_option("--skills", analyze_flags.global.skills, "Skills catalog CSV");
  analyze_cmd->add_option("--courses", analyze_flags.global.courses, "Courses catalog CSV");
  add_catalog_flags(*analyze_cmd, analyze_flags.global);

  // validate
  ValidateFlags validate_flags;
  auto* validate_cmd = app.add_subcommand("validate", "Run a synthetic validation suite");
  validate_cmd->add_option("--suite", validate_flags.suite, "skills|sdg")
      ->required()
      ->check(CLI::IsMember({"skills", "sdg"}));
  validate_cmd->add_option("--seed", validate_flags.seed, "Generator seed (default validation.seed)");
  validate_cmd->add_option("--report", validate_flags.report_path, "Write the JSON report here");
  validate_cmd->add_option("--chart", validate_flags.chart_path, "Write an HTML/SVG bar chart here");
  validate_cmd->add_option("--assert", validate_flags.asserts, "Metric bound, e.g. overall_f1>=0.8 (repeatable)");
  validate_cmd->add_option("--skills", validate_flags.global.skills, "Skills catalog CSV");
  validate_cmd->add_option("--courses", validate_flags.global.courses, "Courses catalog CSV");
  add_catalog_flags(*validate_cmd, validate_flags.global);

  // serve
  ServeFlags serve_flags;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve_cmd->add_option("--port", serve_flags.port, "Port (0 picks a free one; default service.port)");
  serve_cmd->add_option("--host", serve_flags.host, "Bind address (default service.host)");
  serve_cmd->add_option("--skills", serve_flags.global.skills, "Skills catalog CSV");
  serve_cmd->add_option("--courses", serve_flags.global.courses, "Courses catalog CSV");
  add_catalog_flags(*serve_cmd, serve_flags.global);

  // config show
  GlobalFlags config_flags;
  bool as_json = false;
  auto* config_cmd = app.add_subcommand("config", "Inspect configuration");
  config_cmd->require_subcommand(1);
  auto* show_cmd = config_cmd->add_subcommand("show", "Print the effective configuration");
  show_cmd->add_flag("--json", as_json, "Print as JSON");
  show_cmd->add_option("--skills", config_flags.skills, "Skills catalog CSV");
  show_cmd->add_option("--courses", config_flags.courses, "Courses catalog CSV");
  add_catalog_flags(*show_cmd, config_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*build_cmd) return run_index_build(index_flags);
    if (*analyze_cmd) return run_analyze(analyze_flags);
    if (*validate_cmd) return run_validate(validate_flags);
    if (*serve_cmd) return run_serve(serve_flags);
    if (*show_cmd) {
      AppConfig config;
      try {
        config = resolve_config(config_flags);
      } catch (const Error& e) {
        return report(e, kInputError);
      }
      std::cout << (as_json ? config.to_json().dump(2) + "\n" : config.to_text());
      return kOk;
    }
  } catch (const Error& e) {
    return report(e, kFailure);
  } catch (const std::exception& e) {
    std::cerr << "skillmap: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

#include "skillmap/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace skillmap {

int http_status_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::EncodingError:
    case ErrorCode::FormatMismatch:
    case ErrorCode::MalformedMarkup:
    case ErrorCode::InvalidArgument:
      return 400;
    case ErrorCode::OversizeDocument:
      return 413;
    case ErrorCode::EmptyDocument:
    case ErrorCode::EmptyInput:
      return 422;
    default:
      return 500;
  }
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

std::string_view default_error_code(int status) {
  switch (status) {
    case 400: return "BadRequest";
    case 404: return "NotFound";
    case 405: return "MethodNotAllowed";
    case 413: return "OversizeDocument";
    case 503: return "Loading";
    default: return "InternalError";
  }
}

// Parses the upload into a RawDocument; throws Error(InvalidArgument) on a bad request.
RawDocument read_upload(const httplib::Request& req) {
  RawDocument doc;
  std::optional<DocumentFormat> format;
  if (req.is_multipart_form_data()) {
    if (!req.has_file("file")) throw Error(ErrorCode::InvalidArgument, "multipart upload needs a 'file' field");
    const auto file = req.get_file_value("file");
    doc.name = file.filename.empty() ? "upload" : file.filename;
    doc.bytes = file.content;
    if (req.has_file("format")) {
      const std::string declared = req.get_file_value("format").content;
      format = parse_document_format(declared);
      if (!format) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + declared + "'");
    } else {
      format = format_from_filename(doc.name);
    }
  } else {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::InvalidArgument, "body must be multipart/form-data or a JSON object");
    }
    if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
      throw Error(ErrorCode::InvalidArgument, "JSON body needs a string field 'text'");
    }
    doc.bytes = body["text"].get<std::string>();
    doc.name = body.value("name", std::string("document"));
    if (body.contains("format")) {
      if (!body["format"].is_string()) throw Error(ErrorCode::InvalidArgument, "'format' must be a string");
      const std::string declared = body["format"].get<std::string>();
      format = parse_document_format(declared);
      if (!format) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + declared + "'");
    }
  }
  doc.declared_format = format.value_or(DocumentFormat::txt);
  return doc;
}

}  // namespace

struct Service::Impl {
  AppConfig config;
  httplib::Server server;
  mutable std::mutex mu;
  std::condition_variable loaded_cv;
  std::shared_ptr<const AppState> state;
  std::string error;
  bool load_finished = false;
  std::thread loader;

  std::shared_ptr<const AppState> current() const {
    std::lock_guard lock(mu);
    return state;
  }

  void install_routes() {
    server.set_payload_max_length(config.prep.max_size_bytes + (1u << 20));
    server.new_task_queue = [n = config.service.threads] { return new httplib::ThreadPool(static_cast<std::size_t>(n)); };
    server.set_post_routing_handler([origin = config.service.cors_origin](const httplib::Request&,
                                                                          httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) send_error(res, res.status, default_error_code(res.status), "request failed");
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        send_error(res, http_status_for(e.code()), to_string(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "InternalError", e.what());
      }
    });
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/api/analyze", [this](const httplib::Request& req, httplib::Response& res) {
      const auto st = current();
      if (!st) return send_error(res, 503, "Loading", "service is loading catalogs");
      try {
        const RawDocument doc = read_upload(req);
        const AnalysisResult result = analyze_document(*st, doc);
        const bool debug = req.has_param("debug") && req.get_param_value("debug") != "0";
        send_json(res, 200, to_json(result, {.timings = true, .debug = debug}));
      } catch (const Error& e) {
        send_error(res, http_status_for(e.code()), to_string(e.code()), e.what());
      }
    });

    server.Get(R"(/api/sdg/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto st = current();
      if (!st) return send_error(res, 503, "Loading", "service is loading catalogs");
      const std::string raw = req.matches[1];
      int id = 0;
      const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), id);
      if (ec != std::errc() || p != raw.data() + raw.size() || id < 1 || id > 17) {
        return send_error(res, 404, "NotFound", "SDG id must be 1..17, got '" + raw + "'");
      }
      const SdgEntry& e = st->sdgs[static_cast<std::size_t>(id - 1)];
      send_json(res, 200, {{"id", e.id}, {"name", e.name}, {"description", e.description}});
    });

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      const auto st = current();
      if (!st) {
        std::lock_guard lock(mu);
        nlohmann::ordered_json body = {{"status", error.empty() ? "loading" : "error"}};
        if (!error.empty()) body["message"] = error;
        return send_json(res, 503, body);
      }
      send_json(res, 200,
                {{"status", "ok"},
                 {"catalog_sizes",
                  {{"skills", st->skill_index.size()},
                   {"occupations", st->occupations.size()},
                   {"courses", st->course_index.size()},
                   {"sdgs", st->sdgs.size()}}},
                 {"embedder_dim", st->embedder->dim()}});
    });

    server.Get("/api/config", [this](const httplib::Request&, httplib::Response& res) {
      const auto st = current();
      if (!st) return send_error(res, 503, "Loading", "service is loading catalogs");
      send_json(res, 200, st->config.to_json());
    });
  }
};

Service::Service(AppConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->install_routes();
}

Service::~Service() {
  stop();
  if (impl_->loader.joinable()) impl_->loader.join();
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::set_state(std::shared_ptr<const AppState> state) {
  {
    std::lock_guard lock(impl_->mu);
    impl_->state = std::move(state);
    impl_->load_finished = true;
  }
  impl_->loaded_cv.notify_all();
}

void Service::load_async() {
  impl_->loader = std::thread([this] {
    try {
      set_state(load_app_state(impl_->config));
    } catch (const std::exception& e) {
      {
        std::lock_guard lock(impl_->mu);
        impl_->error = e.what();
        impl_->load_finished = true;
      }
      impl_->loaded_cv.notify_all();
    }
  });
}

void Service::wait_loaded() {
  std::unique_lock lock(impl_->mu);
  impl_->loaded_cv.wait(lock, [this] { return impl_->load_finished; });
}

bool Service::ready() const { return impl_->current() != nullptr; }

std::string Service::load_error() const {
  std::lock_guard lock(impl_->mu);
  return impl_->error;
}

}  // namespace skillmap

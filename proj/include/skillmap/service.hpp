#pragma once

#include "skillmap/config.hpp"
#include "skillmap/error.hpp"
#include "skillmap/pipeline.hpp"

#include <memory>
#include <string>

namespace skillmap {

// HTTP status for a library error: 400 for bad input, 413 oversize, 422 empty
// documents, 500 otherwise.
[[nodiscard]] int http_status_for(ErrorCode code) noexcept;

// JSON API over the pipeline:
//   POST /api/analyze      multipart field "file" (+ optional "format") or JSON {name, format, text}
//   GET  /api/sdg/{id}     catalog entry for goal 1..17
//   GET  /api/health       status, catalog sizes, embedder dim
//   GET  /api/config       effective configuration
// Until a state is installed every route answers 503.
class Service {
 public:
  explicit Service(AppConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the listening socket; returns the bound port (ephemeral for 0).
  int bind(const std::string& host, int port);
  // Serves on the bound socket until stop(); blocks.
  bool run();
  void stop();

  void set_state(std::shared_ptr<const AppState> state);
  // Loads the state from the config on a background thread. A failure is kept
  // and reported by load_error(); the service keeps answering 503.
  void load_async();
  void wait_loaded();
  [[nodiscard]] bool ready() const;
  [[nodiscard]] std::string load_error() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace skillmap

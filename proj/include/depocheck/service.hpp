#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "depocheck/judge.hpp"
#include "depocheck/session.hpp"
#include "depocheck/store.hpp"

namespace depocheck {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::filesystem::path data_dir;
  JudgeConfig judge;
};

/// The HTTP API, independent of the transport:
///   POST  /api/transcripts
///   GET   /api/transcripts/{id}
///   GET   /api/transcripts/{id}/span?ref=P:L-P:L
///   POST  /api/transcripts/{id}/nuggets      (empty body extracts)
///   GET   /api/transcripts/{id}/nuggets
///   POST  /api/sessions
///   GET   /api/sessions/{id}
///   PATCH /api/sessions/{id}/nuggets/{nid}
/// Judging runs on a background worker; sessions are polled for status.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ApiResponse handle(const ApiRequest& request);

  /// Blocks until no background job is queued or running.
  void wait_idle();

  const Store& store() const { return store_; }

 private:
  struct ExtractionStatus {
    bool running = false;
    std::string error;
  };

  ApiResponse route(const ApiRequest& request);
  ApiResponse post_transcript(const ApiRequest& request);
  ApiResponse get_transcript(const std::string& id);
  ApiResponse get_span(const std::string& id, const ApiRequest& request);
  ApiResponse post_nuggets(const std::string& id, const ApiRequest& request);
  ApiResponse get_nuggets(const std::string& id);
  ApiResponse post_session(const ApiRequest& request);
  ApiResponse get_session(const std::string& id);
  ApiResponse patch_nugget(const std::string& session_id, const std::string& nugget_id,
                           const ApiRequest& request);

  Transcript require_transcript(const std::string& id) const;
  NuggetBank bank_for(const Transcript& transcript);
  void process_session(const std::string& id);
  void run_extraction(const std::string& transcript_id);

  std::mutex& session_lock(const std::string& id);
  void enqueue(std::function<void()> job);
  void worker_loop();

  Store store_;
  std::unique_ptr<Judge> judge_;

  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> session_locks_;

  std::mutex bank_mutex_;
  std::map<std::string, ExtractionStatus> extractions_;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::function<void()>> queue_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

/// Serves a Service over HTTP, optionally with a static UI bundle at "/".
class HttpServer {
 public:
  HttpServer(Service& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  /// Binds host:port (port 0 picks a free one); returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Returns false if the server failed.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace depocheck

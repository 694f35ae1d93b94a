#include "httplib.h"

#include "depocheck/service.hpp"

namespace depocheck {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {}

  void forward(const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    request.body = req.body;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    ApiResponse response = service.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  }
};

HttpServer::HttpServer(Service& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->forward(req, res);
  };
  impl_->server.Get("/api/.*", handler);
  impl_->server.Post("/api/.*", handler);
  impl_->server.Patch("/api/.*", handler);
  if (static_dir) impl_->server.set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace depocheck

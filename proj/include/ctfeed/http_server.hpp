#pragma once

// cpp-httplib transport for api_router.

#include <string>

#include <httplib.h>

#include "ctfeed/service.hpp"

namespace ctfeed {

class http_server {
 public:
  explicit http_server(game_store& store) : router_(store) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      api_request r;
      r.method = req.method;
      r.path = req.path;
      for (const auto& [key, value] : req.params) r.query.emplace(key, value);
      r.body = req.body;
      auto out = router_.handle(r);
      res.status = out.status;
      res.set_content(out.body, out.content_type);
    };
    server_.Get(R"(/games/.*)", forward);
    server_.Post(R"(/games/.*)", forward);
  }

  /// Binds and serves until stop(); returns false if the port could not be bound.
  bool listen(const std::string& host, int port) { return server_.listen(host, port); }

  /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind().
  int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }

  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  api_router router_;
  httplib::Server server_;
};

}  // namespace ctfeed

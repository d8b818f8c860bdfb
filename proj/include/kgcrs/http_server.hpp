#pragma once

#include <memory>
#include <string>

#include "kgcrs/engine.hpp"

namespace httplib {
class Server;
}

namespace kgcrs {

/// REST front end over an Engine.
///
///   POST  /bots                         multipart: name, kg (file) or kg_from, config (JSON)
///   GET   /bots
///   GET   /bots/{id}
///   PATCH /bots/{id}/config             partial config document
///   POST  /bots/{id}/sessions           optional {"seed": N}
///   POST  /sessions/{id}/messages       {"utterance": "..."} -> turn record
///   GET   /sessions/{id}                state + transcript
///   GET   /bots/{id}/kg/focus?nodes=1,2&radius=1
///
/// Errors are {"error": code, "detail": ..., "stage": ...}.
class HttpServer {
 public:
  explicit HttpServer(Engine& engine);
  ~HttpServer();

  /// Binds and serves until stop(). Port 0 picks a free port; see port().
  bool listen(const std::string& host, int port);
  /// Binds without serving; call serve() afterwards (e.g. from another thread).
  bool bind(const std::string& host, int port);
  bool serve();
  void stop();
  int port() const { return port_; }
  void wait_until_ready() const;

 private:
  void routes();

  Engine& engine_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace kgcrs

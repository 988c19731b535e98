#pragma once

#include <memory>
#include <string>

#include "agentrl/protocol/service.hpp"

namespace agentrl {

// HTTP/1.1 front end for an EnvService: POST /create /reset /step /close
// with JSON bodies, GET /observation /available_actions with a session_id
// query parameter. Errors map to 4xx/5xx with {error:{code,message}} bodies.
class EnvHttpServer {
 public:
  explicit EnvHttpServer(EnvService& service);
  ~EnvHttpServer();

  EnvHttpServer(const EnvHttpServer&) = delete;
  EnvHttpServer& operator=(const EnvHttpServer&) = delete;

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns the bound port, or 0 on failure.
  int start(const std::string& host, int port);
  void stop();

  // Serves on the calling thread until stop() (for the CLI).
  bool run(const std::string& host, int port);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace agentrl

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "agentrl/protocol/service.hpp"
#include "agentrl/protocol/types.hpp"

namespace agentrl {

// Client side of the wire contract. A handle may be moved between threads
// but must not be shared for concurrent calls. Failures are thrown as Error
// with the server's error code.
class EnvClient {
 public:
  virtual ~EnvClient() = default;

  virtual SessionId create_session(EnvKind env_kind, const TaskSpec& task,
                                   uint64_t seed) = 0;
  virtual Observation reset(const SessionId& session) = 0;
  virtual StepResult step(const SessionId& session,
                          const std::string& action) = 0;
  virtual Observation observe(const SessionId& session) = 0;
  virtual ActionList available_actions(const SessionId& session) = 0;
  virtual void close_session(const SessionId& session) = 0;
};

// Calls an EnvService directly; the default transport for training.
class InProcessClient : public EnvClient {
 public:
  explicit InProcessClient(std::shared_ptr<EnvService> service);

  SessionId create_session(EnvKind env_kind, const TaskSpec& task,
                           uint64_t seed) override;
  Observation reset(const SessionId& session) override;
  StepResult step(const SessionId& session, const std::string& action) override;
  Observation observe(const SessionId& session) override;
  ActionList available_actions(const SessionId& session) override;
  void close_session(const SessionId& session) override;

 private:
  std::shared_ptr<EnvService> service_;
};

// Talks to an EnvHttpServer over HTTP/1.1 with JSON bodies.
class HttpEnvClient : public EnvClient {
 public:
  HttpEnvClient(const std::string& host, int port);
  ~HttpEnvClient() override;

  SessionId create_session(EnvKind env_kind, const TaskSpec& task,
                           uint64_t seed) override;
  Observation reset(const SessionId& session) override;
  StepResult step(const SessionId& session, const std::string& action) override;
  Observation observe(const SessionId& session) override;
  ActionList available_actions(const SessionId& session) override;
  void close_session(const SessionId& session) override;

 private:
  struct Impl;
  EnvResponse roundtrip(const EnvRequest& request);
  std::unique_ptr<Impl> impl_;
};

// Each rollout worker builds its own client through one of these.
using ClientFactory = std::function<std::unique_ptr<EnvClient>()>;

ClientFactory in_process_factory(std::shared_ptr<EnvService> service);
ClientFactory http_factory(std::string host, int port);

}  // namespace agentrl

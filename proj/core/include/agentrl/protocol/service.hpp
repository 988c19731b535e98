#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "agentrl/env/episode.hpp"
#include "agentrl/protocol/codec.hpp"
#include "agentrl/protocol/types.hpp"

namespace agentrl {

using EpisodeFactory =
    std::function<std::unique_ptr<Episode>(const TaskSpec&, uint64_t)>;

struct ServiceConfig {
  size_t session_cap = 256;
  // Override to substitute episode construction (used by concurrency tests).
  EpisodeFactory episode_factory;
};

// Owns all live sessions. Distinct sessions may be driven concurrently from
// different threads; overlapping calls on one session are rejected with BUSY
// (callers must serialize per session). All errors are thrown as Error;
// dispatch() additionally maps them onto wire error bodies.
class EnvService {
 public:
  explicit EnvService(ServiceConfig config = {});

  SessionId create_session(EnvKind env_kind, const TaskSpec& task,
                           uint64_t seed);
  Observation reset(const SessionId& session);
  StepResult step(const SessionId& session, const std::string& action);
  Observation observe(const SessionId& session) const;
  ActionList available_actions(const SessionId& session) const;
  void close_session(const SessionId& session);

  size_t live_sessions() const;

  // Codec-level entry used by the HTTP server: never throws, converts
  // failures into {error: {code, message}} responses.
  EnvResponse dispatch(const EnvRequest& request) noexcept;

 private:
  struct Session;

  std::shared_ptr<Session> find(const SessionId& session) const;

  ServiceConfig config_;
  mutable std::mutex registry_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  uint64_t next_id_ = 0;
};

}  // namespace agentrl

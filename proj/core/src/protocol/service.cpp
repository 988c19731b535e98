#include "agentrl/protocol/service.hpp"

#include "agentrl/common/error.hpp"

namespace agentrl {

struct EnvService::Session {
  // Serializes calls on this session; try-lock failure means the caller
  // overlapped two calls, which the contract forbids.
  std::mutex call_mutex;
  TaskSpec task;
  uint64_t seed = 0;
  std::unique_ptr<Episode> episode;
  bool was_reset = false;
  int turn_index = 0;
};

namespace {

class SessionGuard {
 public:
  explicit SessionGuard(std::mutex& m) : mutex_(m) {
    if (!mutex_.try_lock())
      throw Error(ErrorCode::kBusy, "overlapping calls on one session");
  }
  ~SessionGuard() { mutex_.unlock(); }
  SessionGuard(const SessionGuard&) = delete;
  SessionGuard& operator=(const SessionGuard&) = delete;

 private:
  std::mutex& mutex_;
};

}  // namespace

EnvService::EnvService(ServiceConfig config) : config_(config) {}

std::shared_ptr<EnvService::Session> EnvService::find(
    const SessionId& session) const {
  std::lock_guard<std::mutex> lock(registry_mutex_);
  auto it = sessions_.find(session.value);
  if (it == sessions_.end())
    throw Error(ErrorCode::kNotFound, "unknown session: " + session.value);
  return it->second;
}

SessionId EnvService::create_session(EnvKind env_kind, const TaskSpec& task,
                                     uint64_t seed) {
  if (task.env_kind != env_kind)
    throw Error(ErrorCode::kValidation,
                "task env_kind does not match create env_kind");
  auto session = std::make_shared<Session>();
  session->task = task;
  session->seed = seed;
  session->episode = config_.episode_factory
                         ? config_.episode_factory(task, seed)
                         : make_episode(task, seed);  // validates the task

  std::lock_guard<std::mutex> lock(registry_mutex_);
  if (sessions_.size() >= config_.session_cap)
    throw Error(ErrorCode::kCapacity,
                "session cap reached: " + std::to_string(config_.session_cap));
  std::string id = "s-" + std::to_string(++next_id_);
  sessions_.emplace(id, std::move(session));
  return SessionId{id};
}

Observation EnvService::reset(const SessionId& id) {
  auto session = find(id);
  SessionGuard guard(session->call_mutex);
  session->episode->reset();
  session->was_reset = true;
  session->turn_index = 0;
  return {session->episode->observation(), 0, false};
}

StepResult EnvService::step(const SessionId& id, const std::string& action) {
  auto session = find(id);
  SessionGuard guard(session->call_mutex);
  if (!session->was_reset)
    throw Error(ErrorCode::kNotReset, "step before reset");
  if (session->episode->done())
    throw Error(ErrorCode::kEpisodeOver, "step after episode end");
  StepOutcome out = session->episode->step(action);
  ++session->turn_index;
  return {{out.observation, session->turn_index, out.done}, out.reward,
          out.done};
}

Observation EnvService::observe(const SessionId& id) const {
  auto session = find(id);
  SessionGuard guard(session->call_mutex);
  if (!session->was_reset)
    throw Error(ErrorCode::kNotReset, "observe before reset");
  return {session->episode->observation(), session->turn_index,
          session->episode->done()};
}

ActionList EnvService::available_actions(const SessionId& id) const {
  auto session = find(id);
  SessionGuard guard(session->call_mutex);
  if (!session->was_reset)
    throw Error(ErrorCode::kNotReset, "available_actions before reset");
  return {session->episode->available_actions()};
}

void EnvService::close_session(const SessionId& id) {
  std::lock_guard<std::mutex> lock(registry_mutex_);
  if (sessions_.erase(id.value) == 0)
    throw Error(ErrorCode::kNotFound, "unknown session: " + id.value);
}

size_t EnvService::live_sessions() const {
  std::lock_guard<std::mutex> lock(registry_mutex_);
  return sessions_.size();
}

EnvResponse EnvService::dispatch(const EnvRequest& request) noexcept {
  EnvResponse response;
  try {
    auto need = [&](const auto& field, const char* name) -> const auto& {
      if (!field)
        throw Error(ErrorCode::kValidation,
                    std::string("missing field: ") + name);
      return *field;
    };
    switch (request.endpoint) {
      case Endpoint::kCreate:
        response.session_id = create_session(
            need(request.env_kind, "env_kind"), need(request.task, "task"),
            need(request.seed, "seed"));
        break;
      case Endpoint::kReset:
        response.observation =
            reset(SessionId{need(request.session_id, "session_id")});
        break;
      case Endpoint::kStep:
        response.step = step(SessionId{need(request.session_id, "session_id")},
                             need(request.action, "action"));
        break;
      case Endpoint::kObservation:
        response.observation =
            observe(SessionId{need(request.session_id, "session_id")});
        break;
      case Endpoint::kAvailableActions:
        response.actions = available_actions(
            SessionId{need(request.session_id, "session_id")});
        break;
      case Endpoint::kClose:
        close_session(SessionId{need(request.session_id, "session_id")});
        response.closed = true;
        break;
    }
  } catch (const Error& e) {
    response = EnvResponse{};
    response.error = ErrorBody{to_string(e.code()), e.what()};
  } catch (const std::exception& e) {
    response = EnvResponse{};
    response.error = ErrorBody{to_string(ErrorCode::kInternal), e.what()};
  }
  return response;
}

}  // namespace agentrl

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "agentrl/env/task.hpp"
#include "agentrl/protocol/types.hpp"

namespace agentrl {

enum class Endpoint {
  kCreate,
  kReset,
  kStep,
  kObservation,
  kAvailableActions,
  kClose,
};

// URL path for the endpoint, e.g. "/create".
const char* endpoint_path(Endpoint endpoint);
Endpoint endpoint_from_path(const std::string& path);

struct EnvRequest {
  Endpoint endpoint = Endpoint::kCreate;
  std::optional<std::string> session_id;
  std::optional<EnvKind> env_kind;
  std::optional<TaskSpec> task;
  std::optional<uint64_t> seed;
  std::optional<std::string> action;

  bool operator==(const EnvRequest&) const = default;
};

struct ErrorBody {
  std::string code;
  std::string message;

  bool operator==(const ErrorBody&) const = default;
};

// Exactly one field is set; which one is implied by the endpoint answered.
struct EnvResponse {
  std::optional<SessionId> session_id;     // create
  std::optional<Observation> observation;  // reset / observation
  std::optional<StepResult> step;          // step
  std::optional<ActionList> actions;       // available_actions
  std::optional<bool> closed;              // close
  std::optional<ErrorBody> error;

  bool operator==(const EnvResponse&) const = default;
};

// UTF-8 JSON bodies. decode(encode(x)) == x for every representable value;
// malformed input decodes to a VALIDATION error. A body without an
// "endpoint" field is accepted when the transport supplies one (the URL
// path) as `fallback`.
std::string encode_request(const EnvRequest& request);
EnvRequest decode_request(const std::string& body,
                          std::optional<Endpoint> fallback = std::nullopt);
std::string encode_response(const EnvResponse& response);
EnvResponse decode_response(const std::string& body);

// Task <-> JSON object, shared by payloads and task-suite files.
std::string task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const std::string& text);

}  // namespace agentrl

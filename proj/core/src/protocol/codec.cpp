#include "agentrl/protocol/codec.hpp"

#include <nlohmann/json.hpp>

#include "agentrl/common/error.hpp"

namespace agentrl {
namespace {

using json = nlohmann::ordered_json;

json task_json(const TaskSpec& task) {
  return json{{"env_kind", to_string(task.env_kind)},
              {"difficulty", task.difficulty},
              {"gen_seed", task.gen_seed},
              {"goal", task.goal}};
}

TaskSpec task_from(const json& j) {
  TaskSpec task;
  task.env_kind = env_kind_from_string(j.at("env_kind").get<std::string>());
  task.difficulty = j.at("difficulty").get<int>();
  task.gen_seed = j.at("gen_seed").get<uint64_t>();
  task.goal = j.at("goal").get<std::string>();
  return task;
}

json observation_json(const Observation& obs) {
  return json{{"text", obs.text},
              {"turn_index", obs.turn_index},
              {"done", obs.done}};
}

Observation observation_from(const json& j) {
  return {j.at("text").get<std::string>(), j.at("turn_index").get<int>(),
          j.at("done").get<bool>()};
}

json parse(const std::string& body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    throw Error(ErrorCode::kValidation, "malformed JSON body");
  return j;
}

}  // namespace

const char* endpoint_path(Endpoint endpoint) {
  switch (endpoint) {
    case Endpoint::kCreate:
      return "/create";
    case Endpoint::kReset:
      return "/reset";
    case Endpoint::kStep:
      return "/step";
    case Endpoint::kObservation:
      return "/observation";
    case Endpoint::kAvailableActions:
      return "/available_actions";
    case Endpoint::kClose:
      return "/close";
  }
  return "/create";
}

Endpoint endpoint_from_path(const std::string& path) {
  for (Endpoint e : {Endpoint::kCreate, Endpoint::kReset, Endpoint::kStep,
                     Endpoint::kObservation, Endpoint::kAvailableActions,
                     Endpoint::kClose})
    if (path == endpoint_path(e)) return e;
  throw Error(ErrorCode::kValidation, "unknown endpoint: " + path);
}

std::string encode_request(const EnvRequest& request) {
  json j{{"endpoint", endpoint_path(request.endpoint) + 1}};
  if (request.session_id) j["session_id"] = *request.session_id;
  if (request.env_kind) j["env_kind"] = to_string(*request.env_kind);
  if (request.task) j["task"] = task_json(*request.task);
  if (request.seed) j["seed"] = *request.seed;
  if (request.action) j["action"] = *request.action;
  return j.dump();
}

EnvRequest decode_request(const std::string& body,
                          std::optional<Endpoint> fallback) {
  json j = parse(body);
  try {
    EnvRequest request;
    if (j.contains("endpoint"))
      request.endpoint =
          endpoint_from_path("/" + j["endpoint"].get<std::string>());
    else if (fallback)
      request.endpoint = *fallback;
    else
      throw Error(ErrorCode::kValidation, "missing field: endpoint");
    if (j.contains("session_id"))
      request.session_id = j["session_id"].get<std::string>();
    if (j.contains("env_kind"))
      request.env_kind = env_kind_from_string(j["env_kind"].get<std::string>());
    if (j.contains("task")) request.task = task_from(j["task"]);
    if (j.contains("seed")) request.seed = j["seed"].get<uint64_t>();
    if (j.contains("action")) request.action = j["action"].get<std::string>();
    return request;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed request: ") + e.what());
  }
}

std::string encode_response(const EnvResponse& response) {
  json j = json::object();
  if (response.error) {
    j["error"] = {{"code", response.error->code},
                  {"message", response.error->message}};
  } else if (response.session_id) {
    j["session_id"] = response.session_id->value;
  } else if (response.step) {
    j["observation"] = observation_json(response.step->observation);
    j["reward"] = response.step->reward;
    j["done"] = response.step->done;
  } else if (response.observation) {
    j["observation"] = observation_json(*response.observation);
  } else if (response.actions) {
    j["actions"] = response.actions->actions;
  } else if (response.closed) {
    j["closed"] = *response.closed;
  }
  return j.dump();
}

EnvResponse decode_response(const std::string& body) {
  json j = parse(body);
  try {
    EnvResponse response;
    if (j.contains("error")) {
      response.error = ErrorBody{j["error"].at("code").get<std::string>(),
                                 j["error"].at("message").get<std::string>()};
    } else if (j.contains("session_id")) {
      response.session_id = SessionId{j["session_id"].get<std::string>()};
    } else if (j.contains("reward")) {
      response.step = StepResult{observation_from(j.at("observation")),
                                 j["reward"].get<double>(),
                                 j["done"].get<bool>()};
    } else if (j.contains("observation")) {
      response.observation = observation_from(j["observation"]);
    } else if (j.contains("actions")) {
      response.actions = ActionList{j["actions"].get<std::vector<std::string>>()};
    } else if (j.contains("closed")) {
      response.closed = j["closed"].get<bool>();
    } else {
      throw Error(ErrorCode::kValidation, "response carries no payload");
    }
    return response;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed response: ") + e.what());
  }
}

std::string task_to_json(const TaskSpec& task) { return task_json(task).dump(); }

TaskSpec task_from_json(const std::string& text) {
  try {
    return task_from(parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed task: ") + e.what());
  }
}

}  // namespace agentrl

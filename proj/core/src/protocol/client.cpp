#include "agentrl/protocol/client.hpp"

#include <httplib.h>

#include "agentrl/common/error.hpp"

namespace agentrl {

InProcessClient::InProcessClient(std::shared_ptr<EnvService> service)
    : service_(std::move(service)) {}

SessionId InProcessClient::create_session(EnvKind env_kind,
                                          const TaskSpec& task,
                                          uint64_t seed) {
  return service_->create_session(env_kind, task, seed);
}

Observation InProcessClient::reset(const SessionId& session) {
  return service_->reset(session);
}

StepResult InProcessClient::step(const SessionId& session,
                                 const std::string& action) {
  return service_->step(session, action);
}

Observation InProcessClient::observe(const SessionId& session) {
  return service_->observe(session);
}

ActionList InProcessClient::available_actions(const SessionId& session) {
  return service_->available_actions(session);
}

void InProcessClient::close_session(const SessionId& session) {
  service_->close_session(session);
}

struct HttpEnvClient::Impl {
  httplib::Client client;

  Impl(const std::string& host, int port) : client(host, port) {
    client.set_read_timeout(30, 0);
    client.set_connection_timeout(10, 0);
  }
};

HttpEnvClient::HttpEnvClient(const std::string& host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}

HttpEnvClient::~HttpEnvClient() = default;

EnvResponse HttpEnvClient::roundtrip(const EnvRequest& request) {
  httplib::Result result = [&] {
    switch (request.endpoint) {
      case Endpoint::kObservation:
      case Endpoint::kAvailableActions: {
        httplib::Params params;
        if (request.session_id) params.emplace("session_id", *request.session_id);
        return impl_->client.Get(endpoint_path(request.endpoint), params,
                                 httplib::Headers{});
      }
      default:
        return impl_->client.Post(endpoint_path(request.endpoint),
                                  encode_request(request), "application/json");
    }
  }();
  if (!result)
    throw Error(ErrorCode::kInternal,
                "transport failure: " + httplib::to_string(result.error()));
  EnvResponse response = decode_response(result->body);
  if (response.error)
    throw Error(error_code_from_string(response.error->code),
                response.error->message);
  return response;
}

SessionId HttpEnvClient::create_session(EnvKind env_kind, const TaskSpec& task,
                                        uint64_t seed) {
  EnvRequest request;
  request.endpoint = Endpoint::kCreate;
  request.env_kind = env_kind;
  request.task = task;
  request.seed = seed;
  auto response = roundtrip(request);
  if (!response.session_id)
    throw Error(ErrorCode::kInternal, "create returned no session_id");
  return *response.session_id;
}

Observation HttpEnvClient::reset(const SessionId& session) {
  EnvRequest request;
  request.endpoint = Endpoint::kReset;
  request.session_id = session.value;
  auto response = roundtrip(request);
  if (!response.observation)
    throw Error(ErrorCode::kInternal, "reset returned no observation");
  return *response.observation;
}

StepResult HttpEnvClient::step(const SessionId& session,
                               const std::string& action) {
  EnvRequest request;
  request.endpoint = Endpoint::kStep;
  request.session_id = session.value;
  request.action = action;
  auto response = roundtrip(request);
  if (!response.step)
    throw Error(ErrorCode::kInternal, "step returned no result");
  return *response.step;
}

Observation HttpEnvClient::observe(const SessionId& session) {
  EnvRequest request;
  request.endpoint = Endpoint::kObservation;
  request.session_id = session.value;
  auto response = roundtrip(request);
  if (!response.observation)
    throw Error(ErrorCode::kInternal, "observe returned no observation");
  return *response.observation;
}

ActionList HttpEnvClient::available_actions(const SessionId& session) {
  EnvRequest request;
  request.endpoint = Endpoint::kAvailableActions;
  request.session_id = session.value;
  auto response = roundtrip(request);
  if (!response.actions)
    throw Error(ErrorCode::kInternal, "available_actions returned no list");
  return *response.actions;
}

void HttpEnvClient::close_session(const SessionId& session) {
  EnvRequest request;
  request.endpoint = Endpoint::kClose;
  request.session_id = session.value;
  roundtrip(request);
}

ClientFactory in_process_factory(std::shared_ptr<EnvService> service) {
  return [service] { return std::make_unique<InProcessClient>(service); };
}

ClientFactory http_factory(std::string host, int port) {
  return [host = std::move(host), port] {
    return std::make_unique<HttpEnvClient>(host, port);
  };
}

}  // namespace agentrl

#include "agentrl/protocol/http_server.hpp"

#include <httplib.h>

#include <thread>

#include "agentrl/common/error.hpp"

namespace agentrl {
namespace {

int status_for(const std::string& code) {
  if (code == "VALIDATION") return 400;
  if (code == "NOT_FOUND") return 404;
  if (code == "NOT_RESET" || code == "EPISODE_OVER" || code == "BUSY")
    return 409;
  if (code == "CAPACITY") return 503;
  return 500;
}

}  // namespace

struct EnvHttpServer::Impl {
  EnvService& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(EnvService& s) : service(s) {
    auto respond = [this](const EnvRequest& request, httplib::Response& res) {
      EnvResponse response = service.dispatch(request);
      res.status = response.error ? status_for(response.error->code) : 200;
      res.set_content(encode_response(response), "application/json");
    };
    auto handle_post = [respond](Endpoint endpoint) {
      return [respond, endpoint](const httplib::Request& req,
                                 httplib::Response& res) {
        EnvRequest request;
        try {
          request = decode_request(req.body, endpoint);
          request.endpoint = endpoint;  // path wins over any body field
        } catch (const Error& e) {
          EnvResponse bad;
          bad.error = ErrorBody{to_string(e.code()), e.what()};
          res.status = status_for(bad.error->code);
          res.set_content(encode_response(bad), "application/json");
          return;
        }
        respond(request, res);
      };
    };
    auto handle_get = [respond](Endpoint endpoint) {
      return [respond, endpoint](const httplib::Request& req,
                                 httplib::Response& res) {
        EnvRequest request;
        request.endpoint = endpoint;
        if (req.has_param("session_id"))
          request.session_id = req.get_param_value("session_id");
        respond(request, res);
      };
    };
    server.Post("/create", handle_post(Endpoint::kCreate));
    server.Post("/reset", handle_post(Endpoint::kReset));
    server.Post("/step", handle_post(Endpoint::kStep));
    server.Post("/close", handle_post(Endpoint::kClose));
    server.Get("/observation", handle_get(Endpoint::kObservation));
    server.Get("/available_actions", handle_get(Endpoint::kAvailableActions));
  }
};

EnvHttpServer::EnvHttpServer(EnvService& service)
    : impl_(std::make_unique<Impl>(service)) {}

EnvHttpServer::~EnvHttpServer() { stop(); }

int EnvHttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) return 0;
  } else if (!impl_->server.bind_to_port(host, port)) {
    return 0;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void EnvHttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

bool EnvHttpServer::run(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

}  // namespace agentrl

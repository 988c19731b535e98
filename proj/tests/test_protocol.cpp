#include <atomic>
#include <condition_variable>
#include <memory>
#include <set>
#include <thread>
#include <vector>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/protocol/codec.hpp"
#include "agentrl/protocol/http_server.hpp"
#include "agentrl/protocol/service.hpp"
#include "doctest.h"

using namespace agentrl;

namespace {

EnvRequest random_request(RngStream& rng) {
  static const Endpoint kAll[] = {Endpoint::kCreate,      Endpoint::kReset,
                                  Endpoint::kStep,        Endpoint::kObservation,
                                  Endpoint::kAvailableActions, Endpoint::kClose};
  EnvRequest r;
  r.endpoint = kAll[rng.next_below(6)];
  if (rng.next_bool(0.8))
    r.session_id = "s-" + std::to_string(rng.next_below(1000));
  if (rng.next_bool(0.5)) r.env_kind = EnvKind::kCraft;
  if (rng.next_bool(0.5))
    r.task = generate_task(EnvKind::kGrid, 1 + rng.next_below(3),
                           rng.next_u64());
  if (rng.next_bool(0.5)) r.seed = rng.next_u64();
  if (rng.next_bool(0.5))
    r.action = "craft item " + std::to_string(rng.next_below(50));
  return r;
}

EnvResponse random_response(RngStream& rng) {
  EnvResponse r;
  switch (rng.next_below(6)) {
    case 0:
      r.session_id = SessionId{"s-" + std::to_string(rng.next_below(1000))};
      break;
    case 1:
      r.observation = Observation{"some text " + std::to_string(rng.next_u64()),
                                  static_cast<int>(rng.next_below(20)),
                                  rng.next_bool(0.5)};
      break;
    case 2:
      r.step = StepResult{{"obs", static_cast<int>(rng.next_below(20)), false},
                          rng.next_double(),
                          rng.next_bool(0.5)};
      break;
    case 3: {
      ActionList list;
      for (uint64_t i = 0, n = rng.next_below(5); i < n; ++i)
        list.actions.push_back("action " + std::to_string(rng.next_u64()));
      r.actions = list;
      break;
    }
    case 4:
      r.closed = true;
      break;
    case 5:
      r.error = ErrorBody{"VALIDATION", "message " + std::to_string(rng.next_u64())};
      break;
  }
  return r;
}

struct Transcript {
  std::vector<std::string> texts;
  std::vector<double> rewards;

  bool operator==(const Transcript&) const = default;
};

Transcript drive_session(EnvService& service, const TaskSpec& task,
                         const std::vector<std::string>& actions) {
  SessionId id = service.create_session(task.env_kind, task, 0);
  Transcript t;
  t.texts.push_back(service.reset(id).text);
  for (const auto& action : actions) {
    if (service.observe(id).done) break;
    StepResult out = service.step(id, action);
    t.texts.push_back(out.observation.text);
    t.rewards.push_back(out.reward);
  }
  service.close_session(id);
  return t;
}

// An episode whose step blocks until release() so a second call can be
// proven to overlap deterministically.
class BlockingEpisode : public Episode {
 public:
  void reset() override {}
  const std::string& observation() const override { return obs_; }
  bool done() const override { return false; }
  std::vector<std::string> available_actions() const override {
    return {"wait"};
  }
  StepOutcome step(const std::string&) override {
    std::unique_lock<std::mutex> lock(mutex_);
    entered_ = true;
    entered_cv_.notify_all();
    release_cv_.wait(lock, [&] { return released_; });
    return {"done waiting", 0.0, false};
  }

  void wait_until_entered() {
    std::unique_lock<std::mutex> lock(mutex_);
    entered_cv_.wait(lock, [&] { return entered_; });
  }
  void release() {
    std::lock_guard<std::mutex> lock(mutex_);
    released_ = true;
    release_cv_.notify_all();
  }

 private:
  std::string obs_ = "blocking";
  std::mutex mutex_;
  std::condition_variable entered_cv_, release_cv_;
  bool entered_ = false;
  bool released_ = false;
};

}  // namespace

TEST_CASE("codec round-trips randomized requests and responses") {
  RngStream rng(2024);
  for (int i = 0; i < 500; ++i) {
    EnvRequest request = random_request(rng);
    CHECK(decode_request(encode_request(request)) == request);
    EnvResponse response = random_response(rng);
    CHECK(decode_response(encode_response(response)) == response);
  }
  CHECK_THROWS_AS(decode_request("not json"), Error);
  CHECK_THROWS_AS(decode_request("[1,2,3]"), Error);
  CHECK_THROWS_AS(decode_response("{}"), Error);
  CHECK_THROWS_AS(decode_request("{\"session_id\":\"s-1\"}"), Error);
}

TEST_CASE("task serialization round-trips") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    TaskSpec task = generate_task(EnvKind::kHopqa, 2, seed);
    CHECK(task_from_json(task_to_json(task)) == task);
  }
}

TEST_CASE("session lifecycle and error codes") {
  EnvService service;
  TaskSpec task = generate_task(EnvKind::kCraft, 1, 42);

  SUBCASE("calls before reset are NOT_RESET") {
    SessionId id = service.create_session(EnvKind::kCraft, task, 7);
    auto code = [](auto fn) {
      try {
        fn();
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::kInternal;
    };
    CHECK(code([&] { service.observe(id); }) == ErrorCode::kNotReset);
    CHECK(code([&] { service.available_actions(id); }) ==
          ErrorCode::kNotReset);
    CHECK(code([&] { service.step(id, "inventory"); }) ==
          ErrorCode::kNotReset);
  }

  SUBCASE("reset is idempotent and restores finished episodes") {
    SessionId id = service.create_session(EnvKind::kCraft, task, 7);
    Observation first = service.reset(id);
    CHECK(first.turn_index == 0);
    CHECK_FALSE(first.done);
    CHECK_FALSE(first.text.empty());
    CHECK(service.reset(id) == first);
    for (const auto& action : solve_task(task)) service.step(id, action);
    CHECK(service.observe(id).done);
    CHECK(service.available_actions(id).actions.empty());
    CHECK_THROWS_AS(service.step(id, "inventory"), Error);
    CHECK(service.reset(id) == first);
  }

  SUBCASE("observe and available_actions are pure reads") {
    SessionId id = service.create_session(EnvKind::kCraft, task, 7);
    Observation obs = service.reset(id);
    CHECK(service.observe(id) == obs);
    CHECK(service.observe(id) == obs);
    auto actions = service.available_actions(id);
    CHECK(service.available_actions(id) == actions);
    StepResult out = service.step(id, actions.actions[0]);
    CHECK(service.observe(id) == out.observation);
    CHECK(out.observation.turn_index == 1);
  }

  SUBCASE("unknown and closed sessions are NOT_FOUND") {
    CHECK_THROWS_AS(service.reset(SessionId{"nope"}), Error);
    SessionId id = service.create_session(EnvKind::kCraft, task, 7);
    service.close_session(id);
    CHECK_THROWS_AS(service.observe(id), Error);
    CHECK_THROWS_AS(service.close_session(id), Error);
  }

  SUBCASE("create validates task against env kind") {
    CHECK_THROWS_AS(service.create_session(EnvKind::kGrid, task, 7), Error);
    TaskSpec bogus = task;
    bogus.goal = "craft unknown_item";
    CHECK_THROWS_AS(service.create_session(EnvKind::kCraft, bogus, 7), Error);
  }
}

TEST_CASE("session cap yields CAPACITY") {
  EnvService service(ServiceConfig{2, {}});
  TaskSpec task = generate_task(EnvKind::kBandit, 1, 1);
  SessionId a = service.create_session(EnvKind::kBandit, task, 0);
  service.create_session(EnvKind::kBandit, task, 1);
  try {
    service.create_session(EnvKind::kBandit, task, 2);
    FAIL("expected CAPACITY");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCapacity);
  }
  service.close_session(a);
  CHECK_NOTHROW(service.create_session(EnvKind::kBandit, task, 3));
}

TEST_CASE("100 sessions are distinct and pairwise isolated") {
  EnvService service;
  std::vector<TaskSpec> tasks;
  for (uint64_t i = 0; i < 100; ++i)
    tasks.push_back(generate_task(EnvKind::kCraft, 1 + i % 2, i));

  // Solo transcripts, one session at a time.
  std::vector<Transcript> solo;
  for (const auto& task : tasks)
    solo.push_back(drive_session(service, task, solve_task(task)));

  // Same work interleaved across 100 live sessions in shuffled call order.
  std::vector<SessionId> ids;
  std::set<std::string> distinct;
  for (const auto& task : tasks) {
    SessionId id = service.create_session(task.env_kind, task, 0);
    distinct.insert(id.value);
    ids.push_back(id);
  }
  CHECK(distinct.size() == 100);
  std::vector<Transcript> interleaved(100);
  std::vector<std::vector<std::string>> plans;
  std::vector<size_t> cursor(100, 0);
  for (int i = 0; i < 100; ++i) {
    plans.push_back(solve_task(tasks[i]));
    interleaved[i].texts.push_back(service.reset(ids[i]).text);
  }
  RngStream rng(9);
  for (int remaining = 100; remaining > 0;) {
    int i = static_cast<int>(rng.next_below(100));
    if (cursor[i] >= plans[i].size()) continue;
    StepResult out = service.step(ids[i], plans[i][cursor[i]++]);
    interleaved[i].texts.push_back(out.observation.text);
    interleaved[i].rewards.push_back(out.reward);
    if (cursor[i] == plans[i].size()) --remaining;
  }
  for (int i = 0; i < 100; ++i) service.close_session(ids[i]);
  for (int i = 0; i < 100; ++i) CHECK(interleaved[i] == solo[i]);
  CHECK(service.live_sessions() == 0);
}

TEST_CASE("overlapping calls on one session are BUSY") {
  auto blocker = std::make_shared<BlockingEpisode*>(nullptr);
  ServiceConfig config;
  config.episode_factory = [blocker](const TaskSpec&, uint64_t) {
    auto ep = std::make_unique<BlockingEpisode>();
    *blocker = ep.get();
    return ep;
  };
  EnvService service(config);
  TaskSpec task = generate_task(EnvKind::kBandit, 1, 0);
  SessionId id = service.create_session(EnvKind::kBandit, task, 0);
  service.reset(id);

  std::thread worker([&] { service.step(id, "wait"); });
  (*blocker)->wait_until_entered();
  try {
    service.observe(id);
    FAIL("expected BUSY");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBusy);
  }
  (*blocker)->release();
  worker.join();
  CHECK_NOTHROW(service.observe(id));
}

TEST_CASE("dispatch maps failures onto wire error bodies") {
  EnvService service;
  EnvRequest request;
  request.endpoint = Endpoint::kStep;
  request.session_id = "s-404";
  request.action = "x";
  EnvResponse response = service.dispatch(request);
  REQUIRE(response.error.has_value());
  CHECK(response.error->code == "NOT_FOUND");

  request = EnvRequest{};
  request.endpoint = Endpoint::kCreate;  // missing task and seed
  response = service.dispatch(request);
  REQUIRE(response.error.has_value());
  CHECK(response.error->code == "VALIDATION");
}

TEST_CASE("http server round-trips the full lifecycle") {
  auto service = std::make_shared<EnvService>();
  EnvHttpServer server(*service);
  int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);

  HttpEnvClient client("127.0.0.1", port);
  TaskSpec task = generate_task(EnvKind::kHopqa, 1, 5);
  SessionId id = client.create_session(EnvKind::kHopqa, task, 3);
  Observation obs = client.reset(id);
  CHECK(obs == service->observe(id));
  ActionList actions = client.available_actions(id);
  CHECK(actions == service->available_actions(id));
  StepResult out = client.step(id, actions.actions[0]);
  CHECK(out.observation.turn_index == 1);
  CHECK(client.observe(id) == out.observation);
  client.close_session(id);
  try {
    client.observe(id);
    FAIL("expected NOT_FOUND");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFound);
  }

  // In-process and HTTP transports produce identical episodes.
  InProcessClient direct(service);
  SessionId a = client.create_session(EnvKind::kHopqa, task, 3);
  SessionId b = direct.create_session(EnvKind::kHopqa, task, 3);
  CHECK(client.reset(a).text == direct.reset(b).text);
  for (const auto& action : solve_task(task)) {
    StepResult ha = client.step(a, action);
    StepResult hb = direct.step(b, action);
    CHECK(ha.observation.text == hb.observation.text);
    CHECK(ha.reward == hb.reward);
  }
  client.close_session(a);
  direct.close_session(b);
  server.stop();
}

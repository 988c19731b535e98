#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/protocol/http_server.hpp"
#include "agentrl/protocol/service.hpp"
#include "agentrl/rollout/collector.hpp"
#include "agentrl/rollout/pool.hpp"
#include "agentrl/rollout/trajectory.hpp"
#include "doctest.h"

using namespace agentrl;

namespace {

std::shared_ptr<EnvService> make_service() {
  return std::make_shared<EnvService>();
}

Policy random_policy(uint64_t seed, double scale = 0.1) {
  Policy policy = make_policy(kFeatureDim);
  RngStream rng(seed);
  for (double& w : policy.theta) w = scale * (rng.next_double() - 0.5);
  return policy;
}

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
  if (a.task != b.task || a.seed != b.seed ||
      a.outcome_reward != b.outcome_reward || a.truncated != b.truncated ||
      a.turns.size() != b.turns.size())
    return false;
  for (size_t i = 0; i < a.turns.size(); ++i) {
    const Turn& x = a.turns[i];
    const Turn& y = b.turns[i];
    if (x.observation != y.observation || x.action != y.action ||
        x.log_prob != y.log_prob || x.chosen_index != y.chosen_index ||
        x.candidates != y.candidates || x.probs != y.probs)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("turn history is one line per turn plus the pending observation") {
  std::vector<Turn> turns(2);
  turns[0].observation = "goal craft widget | inventory empty";
  turns[0].action = "get iron";
  turns[1].observation = "you got iron";
  turns[1].action = "get\ncoal";  // stray newline must not add a line
  std::string history = turn_history_text(turns, "you got coal");
  CHECK(history ==
        "goal craft widget | inventory empty => get iron\n"
        "you got iron => get coal\n"
        "you got coal");
  CHECK(turn_history_text({}, "fresh scene") == "fresh scene");
}

TEST_CASE("scripted oracle play finishes every environment at its optimum") {
  auto service = make_service();
  InProcessClient client(service);
  RngStream rng(derive_seed(101, 0));
  for (EnvKind kind : {EnvKind::kCraft, EnvKind::kGrid, EnvKind::kHopqa,
                       EnvKind::kBandit}) {
    for (int trial = 0; trial < 25; ++trial) {
      int difficulty =
          min_difficulty(kind) +
          static_cast<int>(rng.next_below(
              static_cast<uint64_t>(max_difficulty(kind) -
                                    min_difficulty(kind) + 1)));
      TaskSpec task = generate_task(kind, difficulty, rng.next_u64());
      int optimal = optimal_length(task);
      ScriptedSelector selector(solve_task(task));
      Trajectory trajectory =
          collect_trajectory(client, task, 7, hard_turn_cap(kind), selector);
      CHECK(trajectory.outcome_reward == 1.0);
      CHECK(!trajectory.truncated);
      CHECK(static_cast<int>(trajectory.turns.size()) == optimal);
    }
  }
  CHECK(service->live_sessions() == 0);
}

TEST_CASE("a horizon below the optimum truncates with zero reward") {
  auto service = make_service();
  InProcessClient client(service);
  TaskSpec task = generate_task(EnvKind::kCraft, 3, 42);
  int optimal = optimal_length(task);
  REQUIRE(optimal > 1);

  ScriptedSelector selector(solve_task(task));
  Trajectory trajectory =
      collect_trajectory(client, task, 7, optimal - 1, selector);
  CHECK(trajectory.truncated);
  CHECK(trajectory.outcome_reward == 0.0);
  CHECK(static_cast<int>(trajectory.turns.size()) == optimal - 1);
  CHECK(service->live_sessions() == 0);
}

TEST_CASE("collection failures close the session and keep the cause") {
  auto service = make_service();
  InProcessClient client(service);
  TaskSpec task = generate_task(EnvKind::kCraft, 2, 7);
  ScriptedSelector empty_script{std::vector<std::string>{}};
  bool thrown = false;
  try {
    collect_trajectory(client, task, 7, 10, empty_script);
  } catch (const CollectionError& e) {
    thrown = true;
    CHECK(e.code() == ErrorCode::kCollectionFailed);
    CHECK(e.underlying() == ErrorCode::kValidation);
  }
  CHECK(thrown);
  CHECK(service->live_sessions() == 0);

  CHECK_THROWS_AS((void)collect_trajectory(client, task, 7, 0, empty_script),
                  Error);
}

TEST_CASE("softmax collection reproduces exactly from the seed") {
  auto service = make_service();
  InProcessClient client(service);
  Policy policy = random_policy(derive_seed(103, 0));
  TaskSpec task = generate_task(EnvKind::kCraft, 2, 11);

  SoftmaxSelector s1(policy, 99);
  Trajectory t1 = collect_trajectory(client, task, 5, 10, s1);
  SoftmaxSelector s2(policy, 99);
  Trajectory t2 = collect_trajectory(client, task, 5, 10, s2);
  CHECK(same_trajectory(t1, t2));

  // A different sampling seed changes the draw stream.
  SoftmaxSelector s3(policy, 100);
  Trajectory t3 = collect_trajectory(client, task, 5, 10, s3);
  bool differs = t1.turns.size() != t3.turns.size();
  for (size_t i = 0; !differs && i < t1.turns.size(); ++i)
    differs = t1.turns[i].action != t3.turns[i].action;
  // Not guaranteed for a single pair, but overwhelmingly likely with many
  // multi-candidate turns; keep it as a smoke signal.
  CHECK(differs);
}

TEST_CASE("recorded log-probs match a fresh evaluation of the history") {
  auto service = make_service();
  InProcessClient client(service);
  Policy policy = random_policy(derive_seed(104, 0), 0.3);
  for (uint64_t task_seed : {1ull, 2ull, 3ull}) {
    TaskSpec task = generate_task(EnvKind::kCraft, 2, task_seed);
    SoftmaxSelector selector(policy, derive_seed(104, task_seed));
    Trajectory trajectory = collect_trajectory(client, task, 5, 12, selector);
    REQUIRE(!trajectory.turns.empty());
    for (size_t i = 0; i < trajectory.turns.size(); ++i) {
      const Turn& turn = trajectory.turns[i];
      auto dist = action_distribution(policy, history_before_turn(trajectory, i),
                                      turn.candidates);
      CHECK(std::abs(std::log(dist.probabilities[turn.chosen_index]) -
                     turn.log_prob) <= 1e-12);
      REQUIRE(turn.probs.size() == dist.probabilities.size());
      for (size_t k = 0; k < dist.probabilities.size(); ++k)
        CHECK(turn.probs[k] == dist.probabilities[k]);
    }
  }
}

TEST_CASE("group and batch collection validate their shapes") {
  RolloutPool pool(in_process_factory(make_service()), 2);
  Policy policy = make_policy(kFeatureDim);
  TaskSpec task = generate_task(EnvKind::kCraft, 1, 5);
  CHECK_THROWS_AS((void)collect_group(pool, policy, task, 1, 1, 10), Error);
  CHECK_THROWS_AS((void)collect_batch(pool, policy, {}, 1, 4, 10), Error);
  CHECK_THROWS_AS((void)RolloutPool(in_process_factory(make_service()), 0),
                  Error);
  CHECK_THROWS_AS((void)RolloutPool(ClientFactory{}, 2), Error);
}

TEST_CASE("group members differ only through their derived seeds") {
  RolloutPool pool(in_process_factory(make_service()), 3);
  Policy policy = random_policy(derive_seed(105, 0));
  TaskSpec task = generate_task(EnvKind::kCraft, 2, 21);
  TrajectoryGroup group = collect_group(pool, policy, task, 77, 6, 8);
  REQUIRE(group.size() == 6);
  for (size_t i = 0; i < group.size(); ++i) {
    CHECK(group[i].seed == derive_seed(77, i));
    CHECK(group[i].task == task);
  }

  // Rerunning any member standalone reproduces it bit for bit.
  auto service = make_service();
  InProcessClient client(service);
  SoftmaxSelector selector(policy, derive_seed(derive_seed(77, 3), 0x5E));
  Trajectory solo =
      collect_trajectory(client, task, derive_seed(77, 3), 8, selector);
  CHECK(same_trajectory(group[3], solo));
}

TEST_CASE("batch results do not depend on the worker count") {
  Policy policy = random_policy(derive_seed(106, 0));
  std::vector<TaskSpec> tasks;
  RngStream rng(derive_seed(106, 1));
  for (int i = 0; i < 6; ++i)
    tasks.push_back(generate_task(EnvKind::kCraft, 1 + i % 3, rng.next_u64()));

  auto run_with = [&](int workers) {
    RolloutPool pool(in_process_factory(make_service()), workers);
    return collect_batch(pool, policy, tasks, 999, 4, 10);
  };
  auto serial = run_with(1);
  auto parallel = run_with(8);
  REQUIRE(serial.size() == parallel.size());
  for (size_t t = 0; t < serial.size(); ++t) {
    REQUIRE(serial[t].size() == parallel[t].size());
    for (size_t i = 0; i < serial[t].size(); ++i) {
      CHECK(same_trajectory(serial[t][i], parallel[t][i]));
      CHECK(trajectory_to_json(serial[t][i]) ==
            trajectory_to_json(parallel[t][i]));
    }
  }
}

TEST_CASE("a failing rollout fails the whole batch") {
  // difficulty outside the env range blows up inside create_session.
  RolloutPool pool(in_process_factory(make_service()), 4);
  Policy policy = make_policy(kFeatureDim);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < 4; ++i) tasks.push_back(generate_task(EnvKind::kCraft, 1, i));
  tasks[2].difficulty = 9;  // invalid
  CHECK_THROWS_AS((void)collect_batch(pool, policy, tasks, 5, 4, 10),
                  CollectionError);
}

TEST_CASE("trajectories round-trip through JSONL") {
  auto service = make_service();
  InProcessClient client(service);
  Policy policy = random_policy(derive_seed(107, 0));
  std::vector<Trajectory> collected;
  for (uint64_t s : {10ull, 11ull, 12ull}) {
    TaskSpec task = generate_task(EnvKind::kHopqa, 2, s);
    SoftmaxSelector selector(policy, s);
    collected.push_back(collect_trajectory(client, task, s, 4, selector));
  }

  auto path = std::filesystem::temp_directory_path() / "agentrl_rollout.jsonl";
  write_trajectories(path, collected);
  auto loaded = read_trajectories(path);
  REQUIRE(loaded.size() == collected.size());
  for (size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].task == collected[i].task);
    CHECK(loaded[i].seed == collected[i].seed);
    CHECK(loaded[i].outcome_reward == collected[i].outcome_reward);
    CHECK(loaded[i].truncated == collected[i].truncated);
    REQUIRE(loaded[i].turns.size() == collected[i].turns.size());
    for (size_t k = 0; k < loaded[i].turns.size(); ++k) {
      CHECK(loaded[i].turns[k].observation == collected[i].turns[k].observation);
      CHECK(loaded[i].turns[k].action == collected[i].turns[k].action);
      CHECK(loaded[i].turns[k].log_prob == collected[i].turns[k].log_prob);
      CHECK(loaded[i].turns[k].candidates == collected[i].turns[k].candidates);
      CHECK(loaded[i].turns[k].candidate_features.empty());
    }
    // Serialization is stable: dump(parse(dump)) == dump.
    CHECK(trajectory_to_json(loaded[i]) == trajectory_to_json(collected[i]));
    // Features rebuilt from text match the collection-time cache.
    ensure_candidate_features(loaded[i]);
    for (size_t k = 0; k < loaded[i].turns.size(); ++k)
      CHECK(loaded[i].turns[k].candidate_features ==
            collected[i].turns[k].candidate_features);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_AS((void)trajectory_from_json("{not json"), Error);
  CHECK_THROWS_AS((void)read_trajectories("/nonexistent/x.jsonl"), Error);
}

TEST_CASE("rollouts over HTTP match in-process rollouts") {
  auto service = make_service();
  EnvHttpServer server(*service);
  int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  Policy policy = random_policy(derive_seed(108, 0));
  std::vector<TaskSpec> tasks;
  for (uint64_t s : {31ull, 32ull})
    tasks.push_back(generate_task(EnvKind::kGrid, 2, s));

  RolloutPool local(in_process_factory(make_service()), 2);
  RolloutPool remote(http_factory("127.0.0.1", port), 2);
  auto a = collect_batch(local, policy, tasks, 4, 4, 12);
  auto b = collect_batch(remote, policy, tasks, 4, 4, 12);
  REQUIRE(a.size() == b.size());
  for (size_t t = 0; t < a.size(); ++t)
    for (size_t i = 0; i < a[t].size(); ++i)
      CHECK(same_trajectory(a[t][i], b[t][i]));
  server.stop();
}

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "agentrl/algo/update.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/policy/feature.hpp"
#include "agentrl/policy/policy.hpp"
#include "agentrl/protocol/service.hpp"
#include "agentrl/rollout/pool.hpp"

namespace {

using namespace agentrl;

void BM_GenerateCraftTask(benchmark::State& state) {
  uint64_t seed = 0;
  for (auto _ : state) {
    auto task = generate_task(EnvKind::kCraft,
                              static_cast<int>(state.range(0)), seed++);
    benchmark::DoNotOptimize(task);
  }
}
BENCHMARK(BM_GenerateCraftTask)->Arg(1)->Arg(4);

std::string sample_history(int turns) {
  std::string text;
  for (int t = 0; t < turns; ++t)
    text += "inventory holds oak_log and iron_ingot | recipes list stick "
            "plank crate => craft plank\n";
  text += "inventory holds plank | recipes list stick crate";
  return text;
}

void BM_Featurize(benchmark::State& state) {
  std::string history = sample_history(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto features = featurize(history, "craft iron_crate");
    benchmark::DoNotOptimize(features);
  }
}
BENCHMARK(BM_Featurize)->Arg(1)->Arg(4)->Arg(16);

void BM_ActionDistribution(benchmark::State& state) {
  Policy policy = make_policy();
  RngStream rng(7);
  for (auto& w : policy.theta) w = rng.next_double() - 0.5;
  std::string history = sample_history(4);
  ActionList actions;
  for (int a = 0; a < state.range(0); ++a)
    actions.actions.push_back("craft item_" + std::to_string(a));
  for (auto _ : state) {
    auto dist = action_distribution(policy, history, actions);
    benchmark::DoNotOptimize(dist);
  }
}
BENCHMARK(BM_ActionDistribution)->Arg(2)->Arg(8)->Arg(32);

void BM_GradLogProb(benchmark::State& state) {
  Policy policy = make_policy();
  std::string history = sample_history(4);
  ActionList actions;
  for (int a = 0; a < state.range(0); ++a)
    actions.actions.push_back("craft item_" + std::to_string(a));
  for (auto _ : state) {
    auto grad = grad_log_prob(policy, history, actions, actions.actions[0]);
    benchmark::DoNotOptimize(grad);
  }
}
BENCHMARK(BM_GradLogProb)->Arg(2)->Arg(8)->Arg(32);

void BM_CollectGroup(benchmark::State& state) {
  RolloutPool pool(in_process_factory(std::make_shared<EnvService>()),
                   static_cast<int>(state.range(0)));
  Policy policy = make_policy();
  TaskSpec task = generate_task(EnvKind::kCraft, 2, 11);
  uint64_t seed = 0;
  for (auto _ : state) {
    auto group = collect_group(pool, policy, task, seed++, 8, 12);
    benchmark::DoNotOptimize(group);
  }
}
BENCHMARK(BM_CollectGroup)->Arg(1)->Arg(4);

void BM_RunUpdate(benchmark::State& state) {
  RolloutPool pool(in_process_factory(std::make_shared<EnvService>()), 4);
  Policy policy = make_policy();
  Policy reference = policy;
  std::vector<TaskSpec> tasks;
  for (uint64_t i = 0; i < 4; ++i)
    tasks.push_back(generate_task(EnvKind::kCraft, 2, i));
  UpdateConfig config;
  config.algorithm = static_cast<Algorithm>(state.range(0));
  auto batch = collect_batch(pool, policy, tasks, 3, config.group_size, 12);
  for (auto _ : state) {
    Policy scratch = policy;
    auto stats = run_update(scratch, reference, batch, config);
    benchmark::DoNotOptimize(stats);
  }
}
BENCHMARK(BM_RunUpdate)
    ->Arg(static_cast<int>(Algorithm::kGrpo))
    ->Arg(static_cast<int>(Algorithm::kPpo));

}  // namespace

BENCHMARK_MAIN();

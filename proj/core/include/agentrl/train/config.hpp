#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "agentrl/algo/update.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/schedule/horizon.hpp"

namespace agentrl {

// Either an explicit phase list or the generated arithmetic form; exactly
// one of the two may be spelled out in the JSON config.
struct ScheduleConfig {
  std::vector<int> phases;  // explicit form, used when non-empty
  int h1 = 0;               // generated form: first budget
  int increment = 0;        //   per-phase growth
  int cap = 0;              //   upper bound
  int delta_steps = 0;      // 0 = spread phases evenly over total_updates
};

struct RunConfig {
  EnvKind env_kind = EnvKind::kCraft;
  UpdateConfig update;
  ScheduleConfig schedule;  // default: the env's hard cap, constant
  uint64_t run_seed = 1;
  int total_updates = 100;
  int tasks_per_update = 8;
  int train_tasks = 64;
  int eval_tasks = 32;
  int eval_every = 0;  // checkpoint cadence in updates; 0 = first/final only
  int workers = 4;
  std::vector<int> difficulties;  // empty = every difficulty of the env
  double temperature = 1.0;
  std::filesystem::path out_dir = "run";

  void validate() const;

  // difficulties with the default materialized.
  std::vector<int> effective_difficulties() const;
};

// Full JSON round-trip; serialization materializes every default so the
// written config.json reproduces the run byte for byte.
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& config);

// Turns the schedule section into a concrete schedule and checks it against
// the environment's hard turn cap; violations throw with their codes.
HorizonSchedule resolve_schedule(const RunConfig& config);

// Deterministic task suites. Task i of a suite gets difficulty
// difficulties[i % n] and gen_seed derive_seed(suite_seed, i).
std::vector<TaskSpec> build_task_suite(EnvKind env_kind,
                                       std::span<const int> difficulties,
                                       int count, uint64_t suite_seed);
uint64_t train_suite_seed(uint64_t run_seed);
uint64_t eval_suite_seed(uint64_t run_seed);

}  // namespace agentrl

#include "agentrl/train/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "nlohmann/json.hpp"

namespace agentrl {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kTrainSuiteTag = 1;
constexpr uint64_t kEvalSuiteTag = 2;

const std::set<std::string>& known_top_level_keys() {
  static const std::set<std::string> keys = {
      "env_kind",      "algorithm",     "learning_rate", "kl_coefficient",
      "clip_epsilon",  "ppo_epochs",    "group_size",    "epsilon_std",
      "baseline_ridge", "run_seed",     "total_updates", "tasks_per_update",
      "train_tasks",   "eval_tasks",    "eval_every",    "workers",
      "difficulties",  "temperature",   "out_dir",       "schedule"};
  return keys;
}

const std::set<std::string>& known_schedule_keys() {
  static const std::set<std::string> keys = {"phases", "h1", "increment",
                                             "cap", "delta_steps"};
  return keys;
}

}  // namespace

void RunConfig::validate() const {
  update.validate();
  if (total_updates < 1)
    throw Error(ErrorCode::kValidation, "total_updates must be positive");
  if (tasks_per_update < 1)
    throw Error(ErrorCode::kValidation, "tasks_per_update must be positive");
  if (train_tasks < 1)
    throw Error(ErrorCode::kValidation, "train_tasks must be positive");
  if (eval_tasks < 0)
    throw Error(ErrorCode::kValidation, "eval_tasks must not be negative");
  if (eval_every < 0)
    throw Error(ErrorCode::kValidation, "eval_every must not be negative");
  if (workers < 1)
    throw Error(ErrorCode::kValidation, "workers must be positive");
  if (!(temperature > 0.0))
    throw Error(ErrorCode::kValidation, "temperature must be positive");
  if (out_dir.empty())
    throw Error(ErrorCode::kValidation, "out_dir must not be empty");
  for (int d : difficulties)
    if (d < min_difficulty(env_kind) || d > max_difficulty(env_kind))
      throw Error(ErrorCode::kValidation,
                  "difficulty " + std::to_string(d) + " is out of range for " +
                      to_string(env_kind));
  bool has_phases = !schedule.phases.empty();
  bool has_generated =
      schedule.h1 != 0 || schedule.increment != 0 || schedule.cap != 0;
  if (has_phases && has_generated)
    throw Error(ErrorCode::kValidation,
                "schedule: give either phases or h1/increment/cap, not both");
}

std::vector<int> RunConfig::effective_difficulties() const {
  if (!difficulties.empty()) return difficulties;
  std::vector<int> all;
  for (int d = min_difficulty(env_kind); d <= max_difficulty(env_kind); ++d)
    all.push_back(d);
  return all;
}

RunConfig run_config_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw Error(ErrorCode::kValidation, "config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (known_top_level_keys().count(key) == 0)
      throw Error(ErrorCode::kValidation, "unknown config key: " + key);

  RunConfig config;
  try {
    if (doc.contains("env_kind"))
      config.env_kind = env_kind_from_string(doc["env_kind"].get<std::string>());
    if (doc.contains("algorithm"))
      config.update.algorithm =
          algorithm_from_string(doc["algorithm"].get<std::string>());
    if (doc.contains("learning_rate"))
      config.update.learning_rate = doc["learning_rate"].get<double>();
    if (doc.contains("kl_coefficient"))
      config.update.kl_coefficient = doc["kl_coefficient"].get<double>();
    if (doc.contains("clip_epsilon"))
      config.update.clip_epsilon = doc["clip_epsilon"].get<double>();
    if (doc.contains("ppo_epochs"))
      config.update.ppo_epochs = doc["ppo_epochs"].get<int>();
    if (doc.contains("group_size"))
      config.update.group_size = doc["group_size"].get<int>();
    if (doc.contains("epsilon_std"))
      config.update.epsilon_std = doc["epsilon_std"].get<double>();
    if (doc.contains("baseline_ridge"))
      config.update.baseline_ridge = doc["baseline_ridge"].get<double>();
    if (doc.contains("run_seed"))
      config.run_seed = doc["run_seed"].get<uint64_t>();
    if (doc.contains("total_updates"))
      config.total_updates = doc["total_updates"].get<int>();
    if (doc.contains("tasks_per_update"))
      config.tasks_per_update = doc["tasks_per_update"].get<int>();
    if (doc.contains("train_tasks"))
      config.train_tasks = doc["train_tasks"].get<int>();
    if (doc.contains("eval_tasks"))
      config.eval_tasks = doc["eval_tasks"].get<int>();
    if (doc.contains("eval_every"))
      config.eval_every = doc["eval_every"].get<int>();
    if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
    if (doc.contains("difficulties"))
      config.difficulties = doc["difficulties"].get<std::vector<int>>();
    if (doc.contains("temperature"))
      config.temperature = doc["temperature"].get<double>();
    if (doc.contains("out_dir"))
      config.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("schedule")) {
      const auto& s = doc["schedule"];
      if (!s.is_object())
        throw Error(ErrorCode::kValidation, "schedule must be an object");
      for (const auto& [key, value] : s.items())
        if (known_schedule_keys().count(key) == 0)
          throw Error(ErrorCode::kValidation, "unknown schedule key: " + key);
      if (s.contains("phases"))
        config.schedule.phases = s["phases"].get<std::vector<int>>();
      if (s.contains("h1")) config.schedule.h1 = s["h1"].get<int>();
      if (s.contains("increment"))
        config.schedule.increment = s["increment"].get<int>();
      if (s.contains("cap")) config.schedule.cap = s["cap"].get<int>();
      if (s.contains("delta_steps"))
        config.schedule.delta_steps = s["delta_steps"].get<int>();
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("config field has the wrong type: ") + e.what());
  }
  config.validate();
  return config;
}

std::string run_config_to_json(const RunConfig& config) {
  ordered_json doc;
  doc["env_kind"] = to_string(config.env_kind);
  doc["algorithm"] = to_string(config.update.algorithm);
  doc["learning_rate"] = config.update.learning_rate;
  doc["kl_coefficient"] = config.update.kl_coefficient;
  doc["clip_epsilon"] = config.update.clip_epsilon;
  doc["ppo_epochs"] = config.update.ppo_epochs;
  doc["group_size"] = config.update.group_size;
  doc["epsilon_std"] = config.update.epsilon_std;
  doc["baseline_ridge"] = config.update.baseline_ridge;
  doc["run_seed"] = config.run_seed;
  doc["total_updates"] = config.total_updates;
  doc["tasks_per_update"] = config.tasks_per_update;
  doc["train_tasks"] = config.train_tasks;
  doc["eval_tasks"] = config.eval_tasks;
  doc["eval_every"] = config.eval_every;
  doc["workers"] = config.workers;
  doc["difficulties"] = config.effective_difficulties();
  doc["temperature"] = config.temperature;
  doc["out_dir"] = config.out_dir.string();
  ordered_json schedule;
  HorizonSchedule resolved = resolve_schedule(config);
  schedule["phases"] = resolved.phases;
  schedule["delta_steps"] = resolved.delta_steps;
  doc["schedule"] = std::move(schedule);
  return doc.dump(2);
}

HorizonSchedule resolve_schedule(const RunConfig& config) {
  int hard_cap = hard_turn_cap(config.env_kind);
  int delta = config.schedule.delta_steps;

  HorizonSchedule schedule;
  if (!config.schedule.phases.empty()) {
    if (delta == 0)
      delta = even_split_delta(config.total_updates,
                               config.schedule.phases.size());
    schedule = schedule_from_phases(config.schedule.phases, delta);
  } else if (config.schedule.h1 != 0 || config.schedule.increment != 0 ||
             config.schedule.cap != 0) {
    if (delta == 0) {
      // Even split needs the phase count, which the generated form implies.
      HorizonSchedule probe = generated_schedule(
          config.schedule.h1, config.schedule.increment, 1,
          config.schedule.cap);
      delta = even_split_delta(config.total_updates, probe.phases.size());
    }
    schedule = generated_schedule(config.schedule.h1,
                                  config.schedule.increment, delta,
                                  config.schedule.cap);
  } else {
    // Default: the environment's full budget for the whole run.
    schedule = schedule_from_phases({hard_cap}, std::max(1, delta));
  }

  auto violations = validate_schedule(schedule, hard_cap);
  if (!violations.empty()) {
    std::string message = "invalid schedule:";
    for (const auto& v : violations)
      message += " [" + v.code + "] " + v.message + ";";
    throw Error(ErrorCode::kValidation, message);
  }
  return schedule;
}

std::vector<TaskSpec> build_task_suite(EnvKind env_kind,
                                       std::span<const int> difficulties,
                                       int count, uint64_t suite_seed) {
  if (difficulties.empty())
    throw Error(ErrorCode::kValidation, "task suite needs difficulties");
  if (count < 1)
    throw Error(ErrorCode::kValidation, "task suite needs a positive count");
  std::vector<TaskSpec> tasks;
  tasks.reserve(count);
  for (int i = 0; i < count; ++i)
    tasks.push_back(generate_task(env_kind,
                                  difficulties[i % difficulties.size()],
                                  derive_seed(suite_seed, i)));
  return tasks;
}

uint64_t train_suite_seed(uint64_t run_seed) {
  return derive_seed(run_seed, kTrainSuiteTag);
}

uint64_t eval_suite_seed(uint64_t run_seed) {
  return derive_seed(run_seed, kEvalSuiteTag);
}

}  // namespace agentrl

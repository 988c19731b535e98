#include "agentrl/train/eval.hpp"

#include <fstream>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/rollout/trajectory.hpp"
#include "nlohmann/json.hpp"

namespace agentrl {
namespace {

using ordered_json = nlohmann::ordered_json;

void check_eval_args(std::span<const TaskSpec> tasks, int horizon) {
  if (tasks.empty())
    throw Error(ErrorCode::kValidation, "evaluation needs at least one task");
  if (horizon < 1)
    throw Error(ErrorCode::kValidation, "horizon must be positive");
}

}  // namespace

EvalResult evaluate_greedy(const Policy& policy,
                           std::span<const TaskSpec> tasks, RolloutPool& pool,
                           int horizon) {
  check_eval_args(tasks, horizon);
  std::vector<RolloutItem> items;
  items.reserve(tasks.size());
  for (size_t i = 0; i < tasks.size(); ++i)
    items.push_back({tasks[i], i, horizon, /*greedy=*/true});
  auto trajectories = pool.run(policy, items);

  EvalResult result;
  result.tasks = static_cast<int>(tasks.size());
  std::map<int, std::pair<int, int>> by_difficulty;  // wins, total
  for (size_t i = 0; i < trajectories.size(); ++i) {
    bool win = trajectories[i].outcome_reward >= 1.0;
    result.success_rate += win ? 1.0 : 0.0;
    result.env_steps += trajectories[i].turns.size();
    auto& [wins, total] = by_difficulty[tasks[i].difficulty];
    wins += win ? 1 : 0;
    ++total;
  }
  result.success_rate /= static_cast<double>(tasks.size());
  for (const auto& [difficulty, counts] : by_difficulty)
    result.per_difficulty[difficulty] =
        static_cast<double>(counts.first) / counts.second;
  return result;
}

PassAtKReport pass_at_k_eval(const Policy& policy,
                             std::span<const TaskSpec> tasks,
                             RolloutPool& pool, int horizon, int k_max,
                             uint64_t seed) {
  check_eval_args(tasks, horizon);
  if (k_max < 1)
    throw Error(ErrorCode::kValidation, "k_max must be positive");

  std::vector<RolloutItem> items;
  items.reserve(tasks.size() * static_cast<size_t>(k_max));
  for (size_t t = 0; t < tasks.size(); ++t) {
    uint64_t task_seed = derive_seed(seed, t);
    for (int j = 0; j < k_max; ++j)
      items.push_back({tasks[t], derive_seed(task_seed, j), horizon, false});
  }
  auto trajectories = pool.run(policy, items);

  // First sample index that solved each task, or k_max.
  std::vector<int> first_win(tasks.size(), k_max);
  for (size_t t = 0; t < tasks.size(); ++t)
    for (int j = 0; j < k_max; ++j)
      if (trajectories[t * k_max + j].outcome_reward >= 1.0) {
        first_win[t] = j;
        break;
      }

  PassAtKReport report;
  report.samples = k_max;
  for (int k = 1; k <= k_max; k *= 2) report.ks.push_back(k);
  if (report.ks.back() != k_max) report.ks.push_back(k_max);
  for (int k : report.ks) {
    int solved = 0;
    for (int win : first_win) solved += win < k ? 1 : 0;
    report.pass_rates.push_back(static_cast<double>(solved) /
                                static_cast<double>(tasks.size()));
  }
  return report;
}

TurnScalingReport turn_scaling_eval(const Policy& policy,
                                    std::span<const TaskSpec> tasks,
                                    RolloutPool& pool, int max_horizon) {
  check_eval_args(tasks, max_horizon);
  std::vector<RolloutItem> items;
  items.reserve(tasks.size());
  for (size_t i = 0; i < tasks.size(); ++i)
    items.push_back({tasks[i], i, max_horizon, /*greedy=*/true});
  auto trajectories = pool.run(policy, items);

  TurnScalingReport report;
  for (int b = 1; b <= max_horizon; ++b) report.budgets.push_back(b);
  report.success.assign(report.budgets.size(), 0.0);
  for (const Trajectory& trajectory : trajectories) {
    if (trajectory.outcome_reward < 1.0) continue;
    // Every budget that would have accommodated this episode scores it.
    for (size_t b = trajectory.turns.size() - 1; b < report.success.size();
         ++b)
      report.success[b] += 1.0;
  }
  for (double& rate : report.success)
    rate /= static_cast<double>(tasks.size());
  return report;
}

std::string eval_report_json(const EvalResult& result) {
  ordered_json doc;
  doc["kind"] = "eval";
  doc["tasks"] = result.tasks;
  doc["success_rate"] = result.success_rate;
  ordered_json by_difficulty = ordered_json::object();
  for (const auto& [difficulty, rate] : result.per_difficulty)
    by_difficulty[std::to_string(difficulty)] = rate;
  doc["per_difficulty"] = std::move(by_difficulty);
  doc["env_steps"] = result.env_steps;
  return doc.dump(2);
}

std::string pass_at_k_report_json(const PassAtKReport& report) {
  ordered_json doc;
  doc["kind"] = "pass_at_k";
  doc["samples"] = report.samples;
  doc["ks"] = report.ks;
  doc["pass_rates"] = report.pass_rates;
  return doc.dump(2);
}

std::string turn_scaling_report_json(const TurnScalingReport& report) {
  ordered_json doc;
  doc["kind"] = "turn_scaling";
  doc["budgets"] = report.budgets;
  doc["success"] = report.success;
  return doc.dump(2);
}

std::string export_transcript(const std::filesystem::path& jsonl_path,
                              size_t index) {
  std::ifstream file(jsonl_path);
  if (!file)
    throw Error(ErrorCode::kNotFound, "no such file: " + jsonl_path.string());
  std::string line;
  size_t seen = 0;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    if (seen++ == index) {
      Trajectory trajectory = trajectory_from_json(line);
      std::string out;
      out += "task: " + std::string(to_string(trajectory.task.env_kind)) +
             " | difficulty " + std::to_string(trajectory.task.difficulty) +
             " | " + trajectory.task.goal + "\n";
      out += "seed " + std::to_string(trajectory.seed) + " | reward " +
             std::to_string(trajectory.outcome_reward) + " | " +
             (trajectory.truncated ? "truncated" : "finished") + " | " +
             std::to_string(trajectory.turns.size()) + " turns\n";
      if (trajectory.turns.empty()) {
        out += "(no turns)\n";
        return out;
      }
      for (size_t i = 0; i < trajectory.turns.size(); ++i) {
        out += "[" + std::to_string(i) + "] " +
               trajectory.turns[i].observation + "\n";
        out += "    => " + trajectory.turns[i].action + "\n";
      }
      return out;
    }
  }
  throw Error(ErrorCode::kNotFound,
              "no trajectory with index " + std::to_string(index) + " in " +
                  jsonl_path.string());
}

}  // namespace agentrl

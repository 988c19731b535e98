#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "agentrl/policy/policy.hpp"
#include "agentrl/rollout/pool.hpp"

namespace agentrl {

struct EvalResult {
  int tasks = 0;
  double success_rate = 0.0;
  std::map<int, double> per_difficulty;
  uint64_t env_steps = 0;
};

// One greedy episode per task at the given turn budget.
EvalResult evaluate_greedy(const Policy& policy,
                           std::span<const TaskSpec> tasks, RolloutPool& pool,
                           int horizon);

struct PassAtKReport {
  int samples = 0;               // episodes drawn per task
  std::vector<int> ks;           // 1, 2, 4, ... up to `samples`
  std::vector<double> pass_rates;  // tasks solved within the first k samples
};

// Draws `k_max` sampled episodes per task once; pass@k reads prefixes of
// that single draw, so the curve is monotone in k by construction.
PassAtKReport pass_at_k_eval(const Policy& policy,
                             std::span<const TaskSpec> tasks,
                             RolloutPool& pool, int horizon, int k_max,
                             uint64_t seed);

struct TurnScalingReport {
  std::vector<int> budgets;      // 1 .. max budget
  std::vector<double> success;   // success rate had the budget been b
};

// One greedy episode per task at the full budget, recording when each task
// first succeeds; success(b) counts the successes within b turns.
TurnScalingReport turn_scaling_eval(const Policy& policy,
                                    std::span<const TaskSpec> tasks,
                                    RolloutPool& pool, int max_horizon);

std::string eval_report_json(const EvalResult& result);
std::string pass_at_k_report_json(const PassAtKReport& report);
std::string turn_scaling_report_json(const TurnScalingReport& report);

// Renders trajectory `index` of a JSONL file as a readable transcript.
// The output is a pure function of the file bytes.
std::string export_transcript(const std::filesystem::path& jsonl_path,
                              size_t index);

}  // namespace agentrl

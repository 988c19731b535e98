#include "agentrl/train/trainer.hpp"

#include <cstdio>
#include <fstream>
#include <memory>

#include "agentrl/algo/update.hpp"
#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/protocol/service.hpp"
#include "agentrl/rollout/pool.hpp"

namespace agentrl {
namespace {

// Stream of batch seeds, disjoint from the task-suite streams (tags 1, 2).
constexpr uint64_t kRolloutStreamTag = 3;

// Shortest exact decimal form is locale-free and round-trips doubles.
std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::filesystem::path save_checkpoint(const Policy& policy,
                                      const std::filesystem::path& dir,
                                      int step) {
  std::filesystem::path path = dir / ("step_" + std::to_string(step) + ".bin");
  save_policy(policy, path);
  return path;
}

}  // namespace

TrainResult train(const RunConfig& config, ClientFactory factory) {
  config.validate();
  HorizonSchedule schedule = resolve_schedule(config);
  std::vector<int> difficulties = config.effective_difficulties();
  std::vector<TaskSpec> suite =
      build_task_suite(config.env_kind, difficulties, config.train_tasks,
                       train_suite_seed(config.run_seed));

  std::filesystem::path checkpoint_dir = config.out_dir / "checkpoints";
  std::filesystem::create_directories(checkpoint_dir);
  {
    std::ofstream file(config.out_dir / "config.json", std::ios::trunc);
    file << run_config_to_json(config) << '\n';
    if (!file)
      throw Error(ErrorCode::kInternal,
                  "cannot write " + (config.out_dir / "config.json").string());
  }

  if (!factory) factory = in_process_factory(std::make_shared<EnvService>());
  RolloutPool pool(std::move(factory), config.workers);

  Policy policy = make_policy(kFeatureDim, config.temperature);
  Policy reference = policy;  // KL anchor stays at the start parameters

  TrainResult result;
  result.metrics_path = config.out_dir / "metrics.csv";
  std::ofstream metrics(result.metrics_path, std::ios::trunc);
  metrics << "step,horizon,mean_reward,adv_mean,adv_std,mean_kl,"
             "mean_entropy,grad_norm,env_steps\n";
  result.checkpoints.push_back(save_checkpoint(policy, checkpoint_dir, 0));

  uint64_t rollout_stream = derive_seed(config.run_seed, kRolloutStreamTag);
  std::vector<TrajectoryGroup> last_batch;
  for (int step = 0; step < config.total_updates; ++step) {
    int horizon = horizon_at(schedule, step);
    std::vector<TaskSpec> batch;
    batch.reserve(config.tasks_per_update);
    for (int j = 0; j < config.tasks_per_update; ++j) {
      size_t index = (static_cast<size_t>(step) * config.tasks_per_update +
                      j) %
                     suite.size();
      batch.push_back(suite[index]);
    }

    UpdateStats stats;
    std::vector<TrajectoryGroup> groups;
    try {
      groups = collect_batch(pool, policy, batch,
                             derive_seed(rollout_stream, step),
                             config.update.group_size, horizon);
      stats = run_update(policy, reference, groups, config.update);
    } catch (const Error&) {
      // The policy still holds the last good parameters (failed updates do
      // not write); preserve them for post-mortems, then surface the error.
      save_policy(policy, checkpoint_dir / "abort.bin");
      throw;
    }

    result.env_steps += stats.turn_count;
    result.reward_curve.push_back(stats.mean_reward);
    metrics << step << ',' << horizon << ','
            << format_double(stats.mean_reward) << ','
            << format_double(stats.adv_mean) << ','
            << format_double(stats.adv_std) << ','
            << format_double(stats.mean_kl) << ','
            << format_double(stats.mean_entropy) << ','
            << format_double(stats.grad_norm) << ',' << result.env_steps
            << '\n';

    if (config.eval_every > 0 && (step + 1) % config.eval_every == 0 &&
        step + 1 != config.total_updates)
      result.checkpoints.push_back(
          save_checkpoint(policy, checkpoint_dir, step + 1));
    if (step + 1 == config.total_updates) last_batch = std::move(groups);
  }
  metrics.flush();
  if (!metrics)
    throw Error(ErrorCode::kInternal,
                "short write to " + result.metrics_path.string());

  result.final_checkpoint =
      save_checkpoint(policy, checkpoint_dir, config.total_updates);
  result.checkpoints.push_back(result.final_checkpoint);

  std::vector<Trajectory> flattened;
  for (TrajectoryGroup& group : last_batch)
    for (Trajectory& trajectory : group)
      flattened.push_back(std::move(trajectory));
  write_trajectories(config.out_dir / "trajectories.jsonl", flattened);

  result.policy = std::move(policy);
  return result;
}

}  // namespace agentrl

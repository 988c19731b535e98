#pragma once

#include <filesystem>
#include <vector>

#include "agentrl/policy/policy.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/train/config.hpp"

namespace agentrl {

struct TrainResult {
  Policy policy;
  uint64_t env_steps = 0;            // turns consumed across all rollouts
  std::vector<double> reward_curve;  // batch mean reward, one per update
  std::filesystem::path metrics_path;
  std::filesystem::path final_checkpoint;
  std::vector<std::filesystem::path> checkpoints;  // step_0 .. final
};

// Runs the training loop described by `config`: per update, look up the
// current turn budget, collect one group per scheduled task, apply the
// configured update. Writes config.json, metrics.csv, trajectories.jsonl
// (the last batch) and checkpoints/step_N.bin under config.out_dir. All
// outputs are byte-deterministic in (config, seed), independent of the
// worker count. `factory` overrides the transport; the default is a fresh
// in-process service.
TrainResult train(const RunConfig& config, ClientFactory factory = {});

}  // namespace agentrl

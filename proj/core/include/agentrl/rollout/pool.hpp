#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agentrl/policy/policy.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/rollout/trajectory.hpp"

namespace agentrl {

// One rollout to run: play `task` with `seed` under the shared policy
// snapshot, cut off after `horizon` turns. Greedy items take the argmax
// action instead of sampling (the seed then only names the session).
struct RolloutItem {
  TaskSpec task;
  uint64_t seed = 0;
  int horizon = 1;
  bool greedy = false;
};

// Fans rollout items over worker threads. Each worker builds its own client,
// and each item's randomness derives from the item's own seed, so results
// are identical for any worker count.
class RolloutPool {
 public:
  RolloutPool(ClientFactory factory, int worker_count);

  int worker_count() const { return worker_count_; }

  // Results in item order. Any item failure fails the whole call.
  std::vector<Trajectory> run(const Policy& policy,
                              std::span<const RolloutItem> items);

 private:
  ClientFactory factory_;
  int worker_count_;
};

// G trajectories of one task; member i uses seed derive_seed(group_seed, i).
TrajectoryGroup collect_group(RolloutPool& pool, const Policy& policy,
                              const TaskSpec& task, uint64_t group_seed,
                              int group_size, int horizon);

// One group per task; group t uses seed derive_seed(batch_seed, t). All
// rollouts are flattened into a single work queue so workers stay busy
// across group boundaries.
std::vector<TrajectoryGroup> collect_batch(RolloutPool& pool,
                                           const Policy& policy,
                                           std::span<const TaskSpec> tasks,
                                           uint64_t batch_seed, int group_size,
                                           int horizon);

}  // namespace agentrl

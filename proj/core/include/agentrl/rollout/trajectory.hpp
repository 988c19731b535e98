#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentrl/env/task.hpp"
#include "agentrl/policy/feature.hpp"
#include "agentrl/protocol/types.hpp"

namespace agentrl {

struct Turn {
  std::string observation;  // text the policy saw before acting
  std::string action;
  double log_prob = 0.0;  // under the collecting policy
  uint32_t chosen_index = 0;
  ActionList candidates;
  // Collection-time caches, reused by updates. Not persisted; empty after a
  // JSONL round-trip (ensure_candidate_features rebuilds the first one).
  std::vector<FeatureVector> candidate_features;
  std::vector<double> probs;
};

struct Trajectory {
  TaskSpec task;
  uint64_t seed = 0;
  std::vector<Turn> turns;
  double outcome_reward = 0.0;  // granted only when the episode ends
  bool truncated = false;       // horizon ran out before the episode ended
};

// All samples of one task collected under the same policy snapshot.
using TrajectoryGroup = std::vector<Trajectory>;

// The policy's view of an episode: one line per completed turn
// ("observation => action"), then the pending observation as the last line.
std::string turn_history_text(std::span<const Turn> turns,
                              std::string_view pending_observation);

// History the policy saw before acting on turns[index].
std::string history_before_turn(const Trajectory& trajectory, size_t index);

// Rebuilds per-turn candidate features from the recorded text, e.g. after
// loading from disk. No-op for turns whose cache is already populated.
void ensure_candidate_features(Trajectory& trajectory);

// One trajectory per JSONL line, fields in a fixed order.
std::string trajectory_to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const std::string& line);

void write_trajectories(const std::filesystem::path& path,
                        std::span<const Trajectory> trajectories);
std::vector<Trajectory> read_trajectories(const std::filesystem::path& path);

}  // namespace agentrl

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agentrl {

enum class EnvKind {
  kCraft,   // recipe-tree crafting
  kGrid,    // partially observable grid navigation
  kHopqa,   // multi-hop question answering over a fact store
  kBandit,  // one-turn two-armed diagnostic
};

const char* to_string(EnvKind kind);
EnvKind env_kind_from_string(const std::string& name);

struct TaskSpec {
  EnvKind env_kind = EnvKind::kCraft;
  int difficulty = 1;
  uint64_t gen_seed = 0;
  std::string goal;

  bool operator==(const TaskSpec&) const = default;
};

// Inclusive difficulty range accepted by each environment.
int min_difficulty(EnvKind kind);
int max_difficulty(EnvKind kind);

// Hard per-episode turn cap enforced by the environment itself.
int hard_turn_cap(EnvKind kind);

// Deterministically builds a solvable task. Same (kind, difficulty, gen_seed)
// always yields the same task, including its goal text.
TaskSpec generate_task(EnvKind kind, int difficulty, uint64_t gen_seed);

// Throws VALIDATION unless `task` is exactly what generate_task would emit
// for its (env_kind, difficulty, gen_seed).
void validate_task(const TaskSpec& task);

// Minimum number of turns an optimal agent needs to reach reward 1.
int optimal_length(const TaskSpec& task);

// One optimal action sequence; its size equals optimal_length(task).
std::vector<std::string> solve_task(const TaskSpec& task);

}  // namespace agentrl

#pragma once

#include <cstdint>
#include <string>

namespace agentrl {

// One-turn two-armed bandit used as a training-stack diagnostic: the winning
// lever is a deterministic function of gen_seed, reward is 1 for pulling it
// and 0 otherwise.
struct BanditInstance {
  std::string winning_action;  // "pull lever a" or "pull lever b"
};

BanditInstance build_bandit_instance(int difficulty, uint64_t gen_seed);

}  // namespace agentrl

#include "agentrl/env/bandit.hpp"

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/internal.hpp"

namespace agentrl {

BanditInstance build_bandit_instance(int difficulty, uint64_t gen_seed) {
  if (difficulty != 1)
    throw Error(ErrorCode::kValidation,
                "bandit difficulty must be 1, got " +
                    std::to_string(difficulty));
  bool arm_a = (derive_seed(gen_seed, internal::kBanditSeedTag) & 1) == 0;
  return {arm_a ? "pull lever a" : "pull lever b"};
}

}  // namespace agentrl

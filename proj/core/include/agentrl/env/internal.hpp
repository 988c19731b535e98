#pragma once

#include <cstdint>

// Seed-stream tags shared by the task generators so different environments
// draw decorrelated streams from the same gen_seed.
namespace agentrl::internal {

inline constexpr uint64_t kCraftSeedTag = 0xC1;
inline constexpr uint64_t kGridSeedTag = 0x61;
inline constexpr uint64_t kHopqaSeedTag = 0xA1;
inline constexpr uint64_t kBanditSeedTag = 0xB1;

}  // namespace agentrl::internal

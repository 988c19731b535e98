#pragma once

#include <span>
#include <vector>

namespace agentrl {

inline constexpr double kDefaultEpsilonStd = 1e-8;

// Group-relative normalization: (r_i - mean) / (population std + epsilon).
// A group of identical rewards gets all-zero advantages.
std::vector<double> grpo_advantages(std::span<const double> rewards,
                                    double epsilon_std = kDefaultEpsilonStd);

// Leave-one-out baseline: r_i minus the mean of the other G-1 rewards.
std::vector<double> rloo_advantages(std::span<const double> rewards);

// The GRPO normalization applied across all groups pooled together, so the
// statistics are batch-wide instead of per-task.
std::vector<std::vector<double>> reinforcepp_advantages(
    std::span<const std::vector<double>> group_rewards,
    double epsilon_std = kDefaultEpsilonStd);

}  // namespace agentrl

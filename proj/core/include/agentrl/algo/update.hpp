#pragma once

#include <span>
#include <string>
#include <vector>

#include "agentrl/algo/advantage.hpp"
#include "agentrl/policy/policy.hpp"
#include "agentrl/rollout/trajectory.hpp"

namespace agentrl {

enum class Algorithm { kPg, kGrpo, kRloo, kReinforcePp, kPpo };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct UpdateConfig {
  Algorithm algorithm = Algorithm::kGrpo;
  double learning_rate = 1e-3;
  double kl_coefficient = 1e-3;  // weight of the KL anchor to the reference
  double clip_epsilon = 0.2;     // ratio clip half-width
  int ppo_epochs = 2;            // optimizer passes per batch (kPpo only)
  int group_size = 8;            // samples per task during collection
  double epsilon_std = kDefaultEpsilonStd;  // normalized-advantage stabilizer
  double baseline_ridge = 1e-6;  // ridge strength of the value fit (kPpo)

  void validate() const;  // throws on out-of-range values
};

struct UpdateStats {
  double mean_reward = 0.0;
  double adv_mean = 0.0;
  double adv_std = 0.0;       // population, over all trajectories
  double mean_kl = 0.0;       // turn-mean KL(policy || reference), pre-update
  double mean_entropy = 0.0;  // turn-mean policy entropy, pre-update
  double grad_norm = 0.0;     // |theta_after - theta_before| / learning_rate
  size_t trajectory_count = 0;
  size_t turn_count = 0;  // env steps consumed by the batch
};

// REINFORCE on outcome rewards: mean over trajectories of
// r(tau) * sum_t grad log pi(a_t | s_t). Recomputes features from the
// recorded text, so it is independent of collection-time caches.
std::vector<double> vanilla_pg_gradient(const Policy& policy,
                                        std::span<const TrajectoryGroup> groups);

// Gradient of the clipped surrogate with one advantage per trajectory, minus
// kl_coefficient * grad KL(policy || reference) at every visited state. A
// turn's surrogate term is ratio * A while ratio*A <= clip(ratio)*A and flat
// otherwise; ratios compare against the recorded behavior probabilities.
// clip_epsilon may be +infinity to disable clipping. The objective is the
// trajectory-mean of per-turn sums. Requires collection-time caches.
std::vector<double> clipped_surrogate_gradient(
    const Policy& policy, const Policy& reference,
    std::span<const TrajectoryGroup> groups,
    std::span<const std::vector<double>> advantages, double clip_epsilon,
    double kl_coefficient);

// theta <- theta + learning_rate * gradient. Refuses to write non-finite
// parameters and leaves the policy untouched in that case.
void apply_update(Policy& policy, std::span<const double> gradient,
                  double learning_rate);

// Dispatches on config.algorithm, applies the update(s) in place, and
// reports pre-update batch statistics. Fills missing caches on the way,
// treating the data as collected by the current policy.
UpdateStats run_update(Policy& policy, const Policy& reference,
                       std::span<TrajectoryGroup> groups,
                       const UpdateConfig& config);

}  // namespace agentrl

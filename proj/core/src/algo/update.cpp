#include "agentrl/algo/update.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agentrl/algo/baseline.hpp"
#include "agentrl/common/error.hpp"

namespace agentrl {
namespace {

void accumulate(std::vector<double>& dense, const FeatureVector& sparse,
                double scale) {
  for (const auto& [index, value] : sparse.entries)
    dense[index] += scale * value;
}

struct PassTotals {
  double kl_sum = 0.0;
  double entropy_sum = 0.0;
  size_t turns = 0;
};

size_t count_trajectories(std::span<const TrajectoryGroup> groups) {
  if (groups.empty())
    throw Error(ErrorCode::kValidation, "update needs at least one group");
  size_t n = 0;
  for (const TrajectoryGroup& group : groups) {
    if (group.empty())
      throw Error(ErrorCode::kValidation, "empty trajectory group");
    n += group.size();
  }
  return n;
}

// One walk over every turn: surrogate gradient, KL anchor, and the
// pre-update KL/entropy totals.
std::vector<double> surrogate_pass(
    const Policy& policy, const Policy& reference,
    std::span<const TrajectoryGroup> groups,
    std::span<const std::vector<double>> advantages, double clip_epsilon,
    double kl_coefficient, PassTotals* totals) {
  size_t n_traj = count_trajectories(groups);
  if (advantages.size() != groups.size())
    throw Error(ErrorCode::kValidation, "advantage/group shape mismatch");
  if (!(clip_epsilon > 0.0))
    throw Error(ErrorCode::kValidation, "clip epsilon must be positive");
  if (!(kl_coefficient >= 0.0))
    throw Error(ErrorCode::kValidation, "kl coefficient must not be negative");

  std::vector<double> grad(policy.theta.size(), 0.0);
  double traj_weight = 1.0 / static_cast<double>(n_traj);
  std::vector<double> cur, ref, ref_log;
  for (size_t g = 0; g < groups.size(); ++g) {
    if (advantages[g].size() != groups[g].size())
      throw Error(ErrorCode::kValidation, "advantage/group shape mismatch");
    for (size_t i = 0; i < groups[g].size(); ++i) {
      const Trajectory& trajectory = groups[g][i];
      double advantage = advantages[g][i];
      if (!std::isfinite(advantage))
        throw Error(ErrorCode::kValidation, "advantage is not finite");
      for (const Turn& turn : trajectory.turns) {
        const auto& feats = turn.candidate_features;
        if (feats.empty())
          throw Error(ErrorCode::kValidation,
                      "turn is missing candidate feature caches");
        if (turn.chosen_index >= feats.size() ||
            turn.probs.size() != feats.size())
          throw Error(ErrorCode::kValidation,
                      "turn caches do not match the candidate list");
        cur = softmax_probabilities(policy.theta, policy.temperature, feats);
        ref = softmax_probabilities(reference.theta, reference.temperature,
                                    feats);

        double p_old = turn.probs[turn.chosen_index];
        if (!(p_old > 0.0))
          throw Error(ErrorCode::kValidation,
                      "behavior probability must be positive");
        double ratio = cur[turn.chosen_index] / p_old;
        double clipped =
            std::isinf(clip_epsilon)
                ? ratio
                : std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
        // The surrogate is flat exactly when the clipped branch is the
        // strictly smaller one.
        bool flows = ratio * advantage <= clipped * advantage;
        if (flows && advantage != 0.0) {
          double scale =
              traj_weight * advantage * ratio / policy.temperature;
          accumulate(grad, feats[turn.chosen_index], scale);
          for (size_t b = 0; b < feats.size(); ++b)
            accumulate(grad, feats[b], -scale * cur[b]);
        }

        // KL(pi || ref) and entropy; p log p -> 0 as p -> 0, so underflowed
        // candidates are skipped.
        double kl = 0.0;
        double ent = 0.0;
        for (size_t a = 0; a < cur.size(); ++a) {
          if (cur[a] <= 0.0) continue;
          double log_p = std::log(cur[a]);
          kl += cur[a] * (log_p - std::log(ref[a]));
          ent -= cur[a] * log_p;
        }
        if (totals != nullptr) {
          totals->kl_sum += kl;
          totals->entropy_sum += ent;
          ++totals->turns;
        }
        if (kl_coefficient != 0.0) {
          // grad KL = (1/T) [ sum_a p_a c_a phi_a - KL * phibar ] with
          // c_a = log(p_a / q_a); the anchor subtracts it.
          double kscale =
              -kl_coefficient * traj_weight / policy.temperature;
          for (size_t a = 0; a < cur.size(); ++a) {
            if (cur[a] <= 0.0) continue;
            double c = std::log(cur[a]) - std::log(ref[a]);
            accumulate(grad, feats[a], kscale * cur[a] * c);
          }
          for (size_t b = 0; b < cur.size(); ++b)
            accumulate(grad, feats[b], -kscale * kl * cur[b]);
        }
      }
    }
  }
  return grad;
}

}  // namespace

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kPg:
      return "pg";
    case Algorithm::kGrpo:
      return "grpo";
    case Algorithm::kRloo:
      return "rloo";
    case Algorithm::kReinforcePp:
      return "reinforcepp";
    case Algorithm::kPpo:
      return "ppo";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "pg") return Algorithm::kPg;
  if (name == "grpo") return Algorithm::kGrpo;
  if (name == "rloo") return Algorithm::kRloo;
  if (name == "reinforcepp" || name == "reinforce++")
    return Algorithm::kReinforcePp;
  if (name == "ppo") return Algorithm::kPpo;
  throw Error(ErrorCode::kValidation, "unknown algorithm: " + name);
}

void UpdateConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(ErrorCode::kValidation, "learning_rate must be positive");
  if (!(kl_coefficient >= 0.0) || !std::isfinite(kl_coefficient))
    throw Error(ErrorCode::kValidation, "kl_coefficient must not be negative");
  if (!(clip_epsilon > 0.0))
    throw Error(ErrorCode::kValidation, "clip_epsilon must be positive");
  if (ppo_epochs < 1)
    throw Error(ErrorCode::kValidation, "ppo_epochs must be at least 1");
  if (group_size < 2)
    throw Error(ErrorCode::kValidation, "group_size must be at least 2");
  if (!(epsilon_std > 0.0))
    throw Error(ErrorCode::kValidation, "epsilon_std must be positive");
  if (!(baseline_ridge >= 0.0))
    throw Error(ErrorCode::kValidation, "baseline_ridge must not be negative");
}

std::vector<double> vanilla_pg_gradient(
    const Policy& policy, std::span<const TrajectoryGroup> groups) {
  size_t n_traj = count_trajectories(groups);
  std::vector<double> grad(policy.theta.size(), 0.0);
  double traj_weight = 1.0 / static_cast<double>(n_traj);
  for (const TrajectoryGroup& group : groups) {
    for (const Trajectory& trajectory : group) {
      if (trajectory.outcome_reward == 0.0) continue;  // exact zero term
      double scale = traj_weight * trajectory.outcome_reward;
      for (size_t i = 0; i < trajectory.turns.size(); ++i) {
        SparseVector g = grad_log_prob(
            policy, history_before_turn(trajectory, i),
            trajectory.turns[i].candidates, trajectory.turns[i].action);
        accumulate(grad, g, scale);
      }
    }
  }
  return grad;
}

std::vector<double> clipped_surrogate_gradient(
    const Policy& policy, const Policy& reference,
    std::span<const TrajectoryGroup> groups,
    std::span<const std::vector<double>> advantages, double clip_epsilon,
    double kl_coefficient) {
  return surrogate_pass(policy, reference, groups, advantages, clip_epsilon,
                        kl_coefficient, nullptr);
}

void apply_update(Policy& policy, std::span<const double> gradient,
                  double learning_rate) {
  if (gradient.size() != policy.theta.size())
    throw Error(ErrorCode::kValidation, "gradient/parameter size mismatch");
  if (!std::isfinite(learning_rate))
    throw Error(ErrorCode::kValidation, "learning rate is not finite");
  std::vector<double> next(policy.theta.size());
  for (size_t k = 0; k < next.size(); ++k) {
    next[k] = policy.theta[k] + learning_rate * gradient[k];
    if (!std::isfinite(next[k]))
      throw Error(ErrorCode::kNumeric,
                  "update produced a non-finite parameter");
  }
  policy.theta = std::move(next);
}

UpdateStats run_update(Policy& policy, const Policy& reference,
                       std::span<TrajectoryGroup> groups,
                       const UpdateConfig& config) {
  config.validate();
  std::span<const TrajectoryGroup> view(groups.data(), groups.size());
  size_t n_traj = count_trajectories(view);

  for (TrajectoryGroup& group : groups) {
    for (Trajectory& trajectory : group) {
      ensure_candidate_features(trajectory);
      for (Turn& turn : trajectory.turns)
        if (turn.probs.empty())
          turn.probs = softmax_probabilities(policy.theta, policy.temperature,
                                             turn.candidate_features);
    }
  }

  std::vector<std::vector<double>> rewards(groups.size());
  double reward_sum = 0.0;
  for (size_t g = 0; g < groups.size(); ++g) {
    rewards[g].reserve(groups[g].size());
    for (const Trajectory& trajectory : groups[g]) {
      rewards[g].push_back(trajectory.outcome_reward);
      reward_sum += trajectory.outcome_reward;
    }
  }

  std::vector<std::vector<double>> advantages;
  double clip = config.clip_epsilon;
  double kl_coefficient = config.kl_coefficient;
  switch (config.algorithm) {
    case Algorithm::kPg:
      advantages = rewards;
      clip = std::numeric_limits<double>::infinity();
      kl_coefficient = 0.0;
      break;
    case Algorithm::kGrpo:
      for (const auto& r : rewards)
        advantages.push_back(grpo_advantages(r, config.epsilon_std));
      break;
    case Algorithm::kRloo:
      for (const auto& r : rewards) advantages.push_back(rloo_advantages(r));
      clip = std::numeric_limits<double>::infinity();
      break;
    case Algorithm::kReinforcePp:
      advantages = reinforcepp_advantages(rewards, config.epsilon_std);
      break;
    case Algorithm::kPpo: {
      ValueBaseline baseline =
          fit_value_baseline(view, config.baseline_ridge);
      advantages.resize(groups.size());
      for (size_t g = 0; g < groups.size(); ++g) {
        advantages[g].reserve(groups[g].size());
        for (const Trajectory& trajectory : groups[g]) {
          if (trajectory.turns.empty())
            throw Error(ErrorCode::kValidation,
                        "cannot value a trajectory with no turns");
          advantages[g].push_back(trajectory.outcome_reward -
                                  baseline.value(state_features(trajectory, 0)));
        }
      }
      break;
    }
  }

  UpdateStats stats;
  stats.trajectory_count = n_traj;
  stats.mean_reward = reward_sum / static_cast<double>(n_traj);
  {
    double sum = 0.0, sq = 0.0;
    for (const auto& group : advantages)
      for (double a : group) sum += a;
    stats.adv_mean = sum / static_cast<double>(n_traj);
    for (const auto& group : advantages)
      for (double a : group) sq += (a - stats.adv_mean) * (a - stats.adv_mean);
    stats.adv_std = std::sqrt(sq / static_cast<double>(n_traj));
  }

  std::vector<double> theta_start = policy.theta;
  int epochs = config.algorithm == Algorithm::kPpo ? config.ppo_epochs : 1;
  PassTotals totals;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    PassTotals epoch_totals;
    std::vector<double> grad =
        surrogate_pass(policy, reference, view, advantages, clip,
                       kl_coefficient, &epoch_totals);
    if (epoch == 0) totals = epoch_totals;
    apply_update(policy, grad, config.learning_rate);
  }

  double shift = 0.0;
  for (size_t k = 0; k < theta_start.size(); ++k) {
    double d = policy.theta[k] - theta_start[k];
    shift += d * d;
  }
  stats.grad_norm = std::sqrt(shift) / config.learning_rate;
  stats.turn_count = totals.turns;
  if (totals.turns > 0) {
    stats.mean_kl = totals.kl_sum / static_cast<double>(totals.turns);
    stats.mean_entropy = totals.entropy_sum / static_cast<double>(totals.turns);
  }
  return stats;
}

}  // namespace agentrl

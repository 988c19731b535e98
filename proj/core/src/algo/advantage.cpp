#include "agentrl/algo/advantage.hpp"

#include <cmath>

#include "agentrl/common/error.hpp"

namespace agentrl {
namespace {

void check_rewards(std::span<const double> rewards) {
  if (rewards.size() < 2)
    throw Error(ErrorCode::kValidation,
                "advantage estimation needs at least two rewards");
  for (double r : rewards)
    if (!std::isfinite(r))
      throw Error(ErrorCode::kValidation, "reward is not finite");
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

Moments population_moments(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

}  // namespace

std::vector<double> grpo_advantages(std::span<const double> rewards,
                                    double epsilon_std) {
  check_rewards(rewards);
  if (!(epsilon_std > 0.0))
    throw Error(ErrorCode::kValidation, "epsilon_std must be positive");
  Moments m = population_moments(rewards);
  std::vector<double> out(rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i)
    out[i] = (rewards[i] - m.mean) / (m.stddev + epsilon_std);
  return out;
}

std::vector<double> rloo_advantages(std::span<const double> rewards) {
  check_rewards(rewards);
  double sum = 0.0;
  for (double r : rewards) sum += r;
  double others = static_cast<double>(rewards.size() - 1);
  std::vector<double> out(rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i)
    out[i] = rewards[i] - (sum - rewards[i]) / others;
  return out;
}

std::vector<std::vector<double>> reinforcepp_advantages(
    std::span<const std::vector<double>> group_rewards, double epsilon_std) {
  if (!(epsilon_std > 0.0))
    throw Error(ErrorCode::kValidation, "epsilon_std must be positive");
  std::vector<double> pooled;
  for (const auto& group : group_rewards)
    pooled.insert(pooled.end(), group.begin(), group.end());
  check_rewards(pooled);
  Moments m = population_moments(pooled);
  std::vector<std::vector<double>> out(group_rewards.size());
  for (size_t g = 0; g < group_rewards.size(); ++g) {
    out[g].reserve(group_rewards[g].size());
    for (double r : group_rewards[g])
      out[g].push_back((r - m.mean) / (m.stddev + epsilon_std));
  }
  return out;
}

}  // namespace agentrl

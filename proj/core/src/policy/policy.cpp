#include "agentrl/policy/policy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "agentrl/common/error.hpp"

namespace agentrl {

Policy make_policy(uint32_t dim, double temperature) {
  if (temperature <= 0.0)
    throw Error(ErrorCode::kValidation, "temperature must be positive");
  Policy policy;
  policy.theta.assign(dim, 0.0);
  policy.temperature = temperature;
  return policy;
}

std::vector<double> softmax_probabilities(
    std::span<const double> theta, double temperature,
    std::span<const FeatureVector> candidates) {
  if (candidates.empty())
    throw Error(ErrorCode::kValidation, "empty candidate list");
  std::vector<double> logits(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    logits[i] = candidates[i].dot(theta) / temperature;
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double norm = 0.0;
  for (double& l : logits) {
    l = std::exp(l - max_logit);
    norm += l;
  }
  for (double& l : logits) l /= norm;
  return logits;
}

SparseVector grad_log_prob_features(std::span<const double> theta,
                                    double temperature,
                                    std::span<const FeatureVector> candidates,
                                    size_t chosen) {
  if (chosen >= candidates.size())
    throw Error(ErrorCode::kValidation, "chosen index out of range");
  std::vector<double> probs =
      softmax_probabilities(theta, temperature, candidates);
  std::unordered_map<uint32_t, double> accum;
  accum.reserve(candidates[chosen].entries.size() * 4);
  for (const auto& [index, value] : candidates[chosen].entries)
    accum[index] += value;
  for (size_t b = 0; b < candidates.size(); ++b)
    for (const auto& [index, value] : candidates[b].entries)
      accum[index] -= probs[b] * value;
  SparseVector grad;
  grad.entries.reserve(accum.size());
  for (const auto& [index, value] : accum)
    grad.entries.emplace_back(index, value / temperature);
  std::sort(grad.entries.begin(), grad.entries.end());
  return grad;
}

EvaluatedCandidates evaluate_candidates(const Policy& policy,
                                        std::string_view history,
                                        const ActionList& actions) {
  if (actions.actions.empty())
    throw Error(ErrorCode::kValidation, "empty action list");
  EvaluatedCandidates out;
  out.features.reserve(actions.actions.size());
  for (const auto& action : actions.actions)
    out.features.push_back(featurize(history, action));
  out.probabilities =
      softmax_probabilities(policy.theta, policy.temperature, out.features);
  return out;
}

ActionDistribution action_distribution(const Policy& policy,
                                       std::string_view history,
                                       const ActionList& actions) {
  return {actions.actions,
          evaluate_candidates(policy, history, actions).probabilities};
}

size_t sample_index(std::span<const double> probabilities, double uniform) {
  double cumulative = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (uniform < cumulative) return i;
  }
  return probabilities.size() - 1;  // guard against rounding at u ~ 1
}

size_t argmax_index(std::span<const double> probabilities) {
  return static_cast<size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) -
      probabilities.begin());
}

SampledAction sample_action(const Policy& policy, std::string_view history,
                            const ActionList& actions, RngStream& rng) {
  auto probs = evaluate_candidates(policy, history, actions).probabilities;
  size_t index = sample_index(probs, rng.next_double());
  return {index, actions.actions[index], std::log(probs[index])};
}

SparseVector grad_log_prob(const Policy& policy, std::string_view history,
                           const ActionList& actions,
                           const std::string& chosen) {
  auto it = std::find(actions.actions.begin(), actions.actions.end(), chosen);
  if (it == actions.actions.end())
    throw Error(ErrorCode::kValidation, "chosen action not in list: " + chosen);
  auto evaluated = evaluate_candidates(policy, history, actions);
  return grad_log_prob_features(
      policy.theta, policy.temperature, evaluated.features,
      static_cast<size_t>(it - actions.actions.begin()));
}

double kl_divergence(const ActionDistribution& p, const ActionDistribution& q) {
  if (p.actions != q.actions)
    throw Error(ErrorCode::kValidation, "KL over mismatched candidate lists");
  if (p.probabilities.size() != q.probabilities.size() ||
      p.probabilities.size() != p.actions.size())
    throw Error(ErrorCode::kValidation, "KL over malformed distributions");
  double kl = 0.0;
  for (size_t i = 0; i < p.probabilities.size(); ++i) {
    if (p.probabilities[i] <= 0.0) continue;
    kl += p.probabilities[i] *
          std::log(p.probabilities[i] / q.probabilities[i]);
  }
  return kl;
}

double entropy(const ActionDistribution& p) {
  double h = 0.0;
  for (double prob : p.probabilities)
    if (prob > 0.0) h -= prob * std::log(prob);
  return h;
}

}  // namespace agentrl

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "agentrl/common/rng.hpp"
#include "agentrl/policy/feature.hpp"
#include "agentrl/protocol/types.hpp"

namespace agentrl {

// Linear-softmax policy over (history, candidate action) feature vectors.
// Immutable in use: updates build a new parameter vector, so rollout workers
// can share a snapshot without synchronization.
struct Policy {
  std::vector<double> theta;
  double temperature = 1.0;

  uint32_t dim() const { return static_cast<uint32_t>(theta.size()); }
};

Policy make_policy(uint32_t dim = kFeatureDim, double temperature = 1.0);

struct ActionDistribution {
  std::vector<std::string> actions;
  std::vector<double> probabilities;
};

// --- feature-space core (exact math over explicit candidate vectors) ---

// Softmax of (theta . phi(candidate)) / temperature with max-subtraction.
std::vector<double> softmax_probabilities(
    std::span<const double> theta, double temperature,
    std::span<const FeatureVector> candidates);

// (phi(chosen) - sum_b p(b) phi(b)) / temperature, sparse.
SparseVector grad_log_prob_features(std::span<const double> theta,
                                    double temperature,
                                    std::span<const FeatureVector> candidates,
                                    size_t chosen);

// --- text-space surface used by rollout ---

// Feature vectors and probabilities for every candidate, computed once.
struct EvaluatedCandidates {
  std::vector<FeatureVector> features;
  std::vector<double> probabilities;
};
EvaluatedCandidates evaluate_candidates(const Policy& policy,
                                        std::string_view history,
                                        const ActionList& actions);

ActionDistribution action_distribution(const Policy& policy,
                                       std::string_view history,
                                       const ActionList& actions);

// Inverse-CDF index for a uniform draw, walking probabilities in order.
size_t sample_index(std::span<const double> probabilities, double uniform);

// First index attaining the maximum probability (= argmax of raw logits for
// any temperature).
size_t argmax_index(std::span<const double> probabilities);

struct SampledAction {
  size_t index = 0;
  std::string action;
  double log_prob = 0.0;
};
SampledAction sample_action(const Policy& policy, std::string_view history,
                            const ActionList& actions, RngStream& rng);

SparseVector grad_log_prob(const Policy& policy, std::string_view history,
                           const ActionList& actions,
                           const std::string& chosen);

// Exact Sum p log(p/q) over a shared candidate list; p=0 terms contribute 0.
double kl_divergence(const ActionDistribution& p, const ActionDistribution& q);

// Shannon entropy in nats.
double entropy(const ActionDistribution& p);

// --- checkpoint io ---
// Layout: magic "AGRL1", u32 dim, f64 temperature, dim x f64 theta, all
// little-endian. Round-trips bit-exactly.
void save_policy(const Policy& policy, const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);

}  // namespace agentrl

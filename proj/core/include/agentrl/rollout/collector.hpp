#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agentrl/common/rng.hpp"
#include "agentrl/policy/policy.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/rollout/trajectory.hpp"

namespace agentrl {

struct SelectionResult {
  size_t index = 0;
  double log_prob = 0.0;
  // Caches handed through to the recorded turn; scripted play leaves them
  // empty and updates recompute what they need.
  std::vector<double> probabilities;
  std::vector<FeatureVector> features;
};

class ActionSelector {
 public:
  virtual ~ActionSelector() = default;
  virtual SelectionResult select(std::string_view history,
                                 const ActionList& actions,
                                 int turn_index) = 0;
};

// Samples from the policy's softmax; the collection behavior in training.
class SoftmaxSelector : public ActionSelector {
 public:
  SoftmaxSelector(const Policy& policy, uint64_t seed);
  SelectionResult select(std::string_view history, const ActionList& actions,
                         int turn_index) override;

 private:
  const Policy* policy_;
  RngStream rng_;
};

// Plays the policy's argmax; the evaluation behavior.
class GreedySelector : public ActionSelector {
 public:
  explicit GreedySelector(const Policy& policy);
  SelectionResult select(std::string_view history, const ActionList& actions,
                         int turn_index) override;

 private:
  const Policy* policy_;
};

// Plays a fixed action sequence; turn t must offer script[t]. A deterministic
// player, so recorded log-probs are 0.
class ScriptedSelector : public ActionSelector {
 public:
  explicit ScriptedSelector(std::vector<std::string> script);
  SelectionResult select(std::string_view history, const ActionList& actions,
                         int turn_index) override;

 private:
  std::vector<std::string> script_;
};

// Runs one episode in a fresh session: reset, then up to `horizon` steps.
// The session is always closed, also on error; failures rethrow as
// CollectionError carrying the underlying code. A trajectory is truncated
// when the horizon runs out first, and then earns no reward.
Trajectory collect_trajectory(EnvClient& client, const TaskSpec& task,
                              uint64_t seed, int horizon,
                              ActionSelector& selector);

}  // namespace agentrl

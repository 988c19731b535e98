#include "agentrl/rollout/collector.hpp"

#include <algorithm>
#include <cmath>

#include "agentrl/common/error.hpp"

namespace agentrl {

SoftmaxSelector::SoftmaxSelector(const Policy& policy, uint64_t seed)
    : policy_(&policy), rng_(seed) {}

SelectionResult SoftmaxSelector::select(std::string_view history,
                                        const ActionList& actions,
                                        int /*turn_index*/) {
  auto evaluated = evaluate_candidates(*policy_, history, actions);
  size_t index = sample_index(evaluated.probabilities, rng_.next_double());
  double log_prob = std::log(evaluated.probabilities[index]);
  return {index, log_prob, std::move(evaluated.probabilities),
          std::move(evaluated.features)};
}

GreedySelector::GreedySelector(const Policy& policy) : policy_(&policy) {}

SelectionResult GreedySelector::select(std::string_view history,
                                       const ActionList& actions,
                                       int /*turn_index*/) {
  auto evaluated = evaluate_candidates(*policy_, history, actions);
  size_t index = argmax_index(evaluated.probabilities);
  double log_prob = std::log(evaluated.probabilities[index]);
  return {index, log_prob, std::move(evaluated.probabilities),
          std::move(evaluated.features)};
}

ScriptedSelector::ScriptedSelector(std::vector<std::string> script)
    : script_(std::move(script)) {}

SelectionResult ScriptedSelector::select(std::string_view /*history*/,
                                         const ActionList& actions,
                                         int turn_index) {
  if (turn_index < 0 || static_cast<size_t>(turn_index) >= script_.size())
    throw Error(ErrorCode::kValidation,
                "script exhausted at turn " + std::to_string(turn_index));
  const std::string& want = script_[turn_index];
  auto it = std::find(actions.actions.begin(), actions.actions.end(), want);
  if (it == actions.actions.end())
    throw Error(ErrorCode::kValidation,
                "scripted action not available: " + want);
  SelectionResult out;
  out.index = static_cast<size_t>(it - actions.actions.begin());
  out.log_prob = 0.0;
  return out;
}

Trajectory collect_trajectory(EnvClient& client, const TaskSpec& task,
                              uint64_t seed, int horizon,
                              ActionSelector& selector) {
  if (horizon < 1)
    throw Error(ErrorCode::kValidation, "horizon must be positive");
  Trajectory out;
  out.task = task;
  out.seed = seed;

  SessionId session;
  bool open = false;
  try {
    session = client.create_session(task.env_kind, task, seed);
    open = true;
    Observation obs = client.reset(session);
    bool done = obs.done;
    double reward_sum = 0.0;
    for (int t = 0; t < horizon && !done; ++t) {
      ActionList actions = client.available_actions(session);
      std::string history = turn_history_text(out.turns, obs.text);
      SelectionResult pick = selector.select(history, actions, t);
      if (pick.index >= actions.actions.size())
        throw Error(ErrorCode::kValidation,
                    "selector returned an out-of-range index");
      StepResult result = client.step(session, actions.actions[pick.index]);

      Turn turn;
      turn.observation = std::move(obs.text);
      turn.action = actions.actions[pick.index];
      turn.log_prob = pick.log_prob;
      turn.chosen_index = static_cast<uint32_t>(pick.index);
      turn.candidates = std::move(actions);
      turn.candidate_features = std::move(pick.features);
      turn.probs = std::move(pick.probabilities);
      out.turns.push_back(std::move(turn));

      reward_sum += result.reward;
      done = result.done;
      obs = std::move(result.observation);
    }
    // Outcome semantics: reward exists only for finished episodes.
    out.truncated = !done;
    out.outcome_reward = done ? reward_sum : 0.0;
    open = false;
    client.close_session(session);
  } catch (const Error& e) {
    if (open) {
      try {
        client.close_session(session);
      } catch (...) {
        // The original failure is the one worth reporting.
      }
    }
    throw CollectionError(e.code(),
                          std::string("rollout failed: ") + e.what());
  }
  return out;
}

}  // namespace agentrl

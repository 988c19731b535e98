#pragma once

#include <memory>
#include <string>
#include <vector>

#include "agentrl/env/task.hpp"

namespace agentrl {

struct StepOutcome {
  std::string observation;
  double reward = 0.0;
  bool done = false;
};

// One live environment episode. State is a pure function of the task (and
// the session seed, which current environments ignore so that trajectory
// groups share identical dynamics), so reset() always restores the exact
// initial state.
class Episode {
 public:
  virtual ~Episode() = default;

  virtual void reset() = 0;
  virtual const std::string& observation() const = 0;
  virtual bool done() const = 0;

  // Candidate actions in a stable order; empty once the episode is done.
  virtual std::vector<std::string> available_actions() const = 0;

  // pre: !done(). Unknown actions consume a turn: the episode stays in
  // place, reward is 0, and the observation says the action was invalid.
  // Every episode terminates by `hard_turn_cap(kind)` turns at the latest.
  virtual StepOutcome step(const std::string& action) = 0;
};

// Validates the task and constructs the matching episode, un-reset.
std::unique_ptr<Episode> make_episode(const TaskSpec& task, uint64_t seed);

}  // namespace agentrl

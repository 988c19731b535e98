#pragma once

#include <string>
#include <vector>

namespace agentrl {

struct SessionId {
  std::string value;

  bool operator==(const SessionId&) const = default;
};

struct Observation {
  std::string text;
  int turn_index = 0;
  bool done = false;

  bool operator==(const Observation&) const = default;
};

struct ActionList {
  std::vector<std::string> actions;

  bool operator==(const ActionList&) const = default;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;

  bool operator==(const StepResult&) const = default;
};

}  // namespace agentrl

#include "agentrl/schedule/horizon.hpp"

#include <algorithm>

#include "agentrl/common/error.hpp"

namespace agentrl {

HorizonSchedule schedule_from_phases(std::vector<int> phases,
                                     int delta_steps) {
  if (phases.empty())
    throw Error(ErrorCode::kValidation, "schedule needs at least one phase");
  if (delta_steps < 1)
    throw Error(ErrorCode::kValidation, "delta_steps must be positive");
  return {std::move(phases), delta_steps};
}

HorizonSchedule generated_schedule(int h1, int increment, int delta_steps,
                                   int cap) {
  if (h1 < 1 || increment < 1 || cap < h1)
    throw Error(ErrorCode::kValidation,
                "generated schedule needs 1 <= h1 <= cap and increment >= 1");
  std::vector<int> phases;
  for (int h = h1; ; h = std::min(h + increment, cap)) {
    phases.push_back(h);
    if (h >= cap) break;
  }
  return schedule_from_phases(std::move(phases), delta_steps);
}

std::vector<ScheduleViolation> validate_schedule(
    const HorizonSchedule& schedule, int hard_cap) {
  std::vector<ScheduleViolation> violations;
  if (schedule.phases.empty())
    violations.push_back({"EMPTY", "schedule has no phases"});
  if (schedule.delta_steps < 1)
    violations.push_back(
        {"DELTA", "delta_steps is " + std::to_string(schedule.delta_steps)});
  for (size_t i = 0; i < schedule.phases.size(); ++i) {
    if (schedule.phases[i] < 1) {
      violations.push_back(
          {"POSITIVITY", "phase " + std::to_string(i) + " is " +
                             std::to_string(schedule.phases[i])});
    }
    if (i > 0 && schedule.phases[i] <= schedule.phases[i - 1]) {
      violations.push_back(
          {"MONOTONICITY",
           "phase " + std::to_string(i) + " does not increase: " +
               std::to_string(schedule.phases[i - 1]) + " -> " +
               std::to_string(schedule.phases[i])});
    }
    if (schedule.phases[i] > hard_cap) {
      violations.push_back(
          {"CAP", "phase " + std::to_string(i) + " exceeds the turn cap " +
                      std::to_string(hard_cap)});
    }
  }
  return violations;
}

int horizon_at(const HorizonSchedule& schedule, int step) {
  if (schedule.phases.empty() || schedule.delta_steps < 1)
    throw Error(ErrorCode::kValidation, "malformed schedule");
  if (step < 0)
    throw Error(ErrorCode::kValidation, "step must not be negative");
  size_t phase = static_cast<size_t>(step / schedule.delta_steps);
  phase = std::min(phase, schedule.phases.size() - 1);
  return schedule.phases[phase];
}

int even_split_delta(int total_steps, size_t phase_count) {
  if (total_steps < 1 || phase_count < 1)
    throw Error(ErrorCode::kValidation,
                "even split needs positive steps and phases");
  return static_cast<int>(
      (static_cast<size_t>(total_steps) + phase_count - 1) / phase_count);
}

}  // namespace agentrl

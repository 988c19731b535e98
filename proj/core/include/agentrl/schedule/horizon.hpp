#pragma once

#include <string>
#include <vector>

namespace agentrl {

// Piecewise-constant turn-budget schedule over training steps: the budget
// starts small and expands phase by phase, so early training optimizes short
// episodes and later training gets the full horizon.
struct HorizonSchedule {
  std::vector<int> phases;  // strictly increasing turn budgets
  int delta_steps = 1;      // training steps spent in each phase
};

struct ScheduleViolation {
  std::string code;  // EMPTY, DELTA, POSITIVITY, MONOTONICITY, CAP
  std::string message;
};

// Explicit phase list. Shape errors throw; semantic violations are reported
// by validate_schedule.
HorizonSchedule schedule_from_phases(std::vector<int> phases, int delta_steps);

// Arithmetic form: h1, h1+increment, ... capped at `cap`, so that
// horizon_at(step) == min(h1 + increment * (step / delta_steps), cap).
HorizonSchedule generated_schedule(int h1, int increment, int delta_steps,
                                   int cap);

// All violations against the environment's hard turn cap; empty when valid.
std::vector<ScheduleViolation> validate_schedule(
    const HorizonSchedule& schedule, int hard_cap);

// phases[min(step / delta_steps, n - 1)].
int horizon_at(const HorizonSchedule& schedule, int step);

// Even split of a training run over the phases: ceil(total / phases).
int even_split_delta(int total_steps, size_t phase_count);

}  // namespace agentrl

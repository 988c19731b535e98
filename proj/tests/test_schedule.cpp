#include <vector>

#include "agentrl/common/error.hpp"
#include "agentrl/schedule/horizon.hpp"
#include "doctest.h"

using namespace agentrl;

namespace {

bool has_violation(const std::vector<ScheduleViolation>& violations,
                   const std::string& code) {
  for (const auto& v : violations)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("phase lookup switches exactly at the phase boundary") {
  HorizonSchedule schedule = schedule_from_phases({5, 10}, 50);
  CHECK(horizon_at(schedule, 0) == 5);
  CHECK(horizon_at(schedule, 49) == 5);
  CHECK(horizon_at(schedule, 50) == 10);
  CHECK(horizon_at(schedule, 99) == 10);
  // Past the last boundary the final phase holds forever.
  CHECK(horizon_at(schedule, 100) == 10);
  CHECK(horizon_at(schedule, 100000) == 10);
  CHECK_THROWS_AS((void)horizon_at(schedule, -1), Error);
}

TEST_CASE("a single phase is a constant schedule") {
  HorizonSchedule schedule = schedule_from_phases({7}, 10);
  for (int step : {0, 9, 10, 500}) CHECK(horizon_at(schedule, step) == 7);
  CHECK(validate_schedule(schedule, 20).empty());
}

TEST_CASE("generated schedules grow arithmetically and stop at the cap") {
  HorizonSchedule schedule = generated_schedule(5, 5, 100, 20);
  CHECK(schedule.phases == std::vector<int>{5, 10, 15, 20});
  CHECK(horizon_at(schedule, 0) == 5);
  CHECK(horizon_at(schedule, 250) == 15);
  CHECK(horizon_at(schedule, 399) == 20);
  CHECK(horizon_at(schedule, 5000) == 20);

  // The closed form min(h1 + inc * (step / delta), cap) holds everywhere,
  // also when the last increment lands past the cap.
  HorizonSchedule uneven = generated_schedule(5, 4, 30, 18);
  CHECK(uneven.phases == std::vector<int>{5, 9, 13, 17, 18});
  for (int step = 0; step < 400; ++step) {
    int closed_form = std::min(5 + 4 * (step / 30), 18);
    CHECK(horizon_at(uneven, step) == closed_form);
  }

  // Degenerate but legal: the start already sits at the cap.
  CHECK(generated_schedule(6, 3, 10, 6).phases == std::vector<int>{6});

  CHECK_THROWS_AS((void)generated_schedule(0, 5, 10, 20), Error);
  CHECK_THROWS_AS((void)generated_schedule(5, 0, 10, 20), Error);
  CHECK_THROWS_AS((void)generated_schedule(21, 5, 10, 20), Error);
}

TEST_CASE("validation reports every violation with its code") {
  CHECK(validate_schedule(schedule_from_phases({5, 10, 20}, 50), 20).empty());

  auto flat = validate_schedule(schedule_from_phases({10, 10}, 5), 20);
  CHECK(has_violation(flat, "MONOTONICITY"));

  auto uncapped = validate_schedule(schedule_from_phases({5, 25}, 5), 20);
  CHECK(has_violation(uncapped, "CAP"));
  CHECK(!has_violation(uncapped, "MONOTONICITY"));

  auto negative = validate_schedule(schedule_from_phases({-3, 10}, 5), 20);
  CHECK(has_violation(negative, "POSITIVITY"));

  HorizonSchedule broken;
  broken.phases = {8, 4};
  broken.delta_steps = 0;
  auto many = validate_schedule(broken, 6);
  CHECK(has_violation(many, "DELTA"));
  CHECK(has_violation(many, "MONOTONICITY"));
  CHECK(has_violation(many, "CAP"));

  CHECK_THROWS_AS((void)schedule_from_phases({}, 5), Error);
  CHECK_THROWS_AS((void)schedule_from_phases({5}, 0), Error);
}

TEST_CASE("even split covers the run in equal phase spans") {
  CHECK(even_split_delta(100, 2) == 50);
  CHECK(even_split_delta(100, 3) == 34);  // ceil keeps every phase reachable
  CHECK(even_split_delta(1, 4) == 1);

  // With the even split, the last phase is in use by the final step.
  for (int total : {10, 99, 100, 101}) {
    for (size_t n : {1u, 2u, 3u, 4u}) {
      std::vector<int> phases;
      for (size_t i = 0; i < n; ++i) phases.push_back(5 * (1 + (int)i));
      HorizonSchedule schedule =
          schedule_from_phases(phases, even_split_delta(total, n));
      CHECK(horizon_at(schedule, total - 1) == phases.back());
    }
  }
  CHECK_THROWS_AS((void)even_split_delta(0, 3), Error);
}

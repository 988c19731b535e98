#include "agentrl/env/task.hpp"

#include "agentrl/common/error.hpp"
#include "agentrl/env/bandit.hpp"
#include "agentrl/env/craft.hpp"
#include "agentrl/env/grid.hpp"
#include "agentrl/env/hopqa.hpp"

namespace agentrl {

const char* to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kCraft:
      return "craft";
    case EnvKind::kGrid:
      return "grid";
    case EnvKind::kHopqa:
      return "hopqa";
    case EnvKind::kBandit:
      return "bandit";
  }
  return "craft";
}

EnvKind env_kind_from_string(const std::string& name) {
  if (name == "craft") return EnvKind::kCraft;
  if (name == "grid") return EnvKind::kGrid;
  if (name == "hopqa") return EnvKind::kHopqa;
  if (name == "bandit") return EnvKind::kBandit;
  throw Error(ErrorCode::kValidation, "unknown env kind: " + name);
}

int min_difficulty(EnvKind) { return 1; }

int max_difficulty(EnvKind kind) {
  switch (kind) {
    case EnvKind::kCraft:
      return 4;
    case EnvKind::kGrid:
    case EnvKind::kHopqa:
      return 3;
    case EnvKind::kBandit:
      return 1;
  }
  return 1;
}

int hard_turn_cap(EnvKind kind) {
  switch (kind) {
    case EnvKind::kCraft:
    case EnvKind::kGrid:
      return 20;
    case EnvKind::kHopqa:
      return 4;
    case EnvKind::kBandit:
      return 1;
  }
  return 1;
}

TaskSpec generate_task(EnvKind kind, int difficulty, uint64_t gen_seed) {
  if (difficulty < min_difficulty(kind) || difficulty > max_difficulty(kind))
    throw Error(ErrorCode::kValidation,
                std::string("difficulty out of range for ") + to_string(kind) +
                    ": " + std::to_string(difficulty));
  TaskSpec task{kind, difficulty, gen_seed, ""};
  switch (kind) {
    case EnvKind::kCraft:
      task.goal = "craft " + build_craft_instance(difficulty, gen_seed).goal_item;
      break;
    case EnvKind::kGrid: {
      auto inst = build_grid_instance(difficulty, gen_seed);
      const auto& goal = inst.objects[inst.goal_object];
      task.goal = "go to the " + goal.color + " " + goal.kind;
      break;
    }
    case EnvKind::kHopqa:
      task.goal = build_hopqa_instance(difficulty, gen_seed).question;
      break;
    case EnvKind::kBandit:
      task.goal = "pull the winning lever";
      break;
  }
  return task;
}

void validate_task(const TaskSpec& task) {
  TaskSpec expect = generate_task(task.env_kind, task.difficulty, task.gen_seed);
  if (task.goal != expect.goal)
    throw Error(ErrorCode::kValidation,
                "task goal does not match its generator: \"" + task.goal +
                    "\" vs \"" + expect.goal + "\"");
}

int optimal_length(const TaskSpec& task) {
  validate_task(task);
  switch (task.env_kind) {
    case EnvKind::kCraft:
      return craft_optimal_length(
          build_craft_instance(task.difficulty, task.gen_seed));
    case EnvKind::kGrid: {
      int turns = grid_search(build_grid_instance(task.difficulty, task.gen_seed),
                              nullptr);
      if (turns < 0)
        throw Error(ErrorCode::kInternal, "unsolvable grid task");
      return turns;
    }
    case EnvKind::kHopqa:
      return task.difficulty + 1;
    case EnvKind::kBandit:
      return 1;
  }
  throw Error(ErrorCode::kValidation, "unknown env kind");
}

std::vector<std::string> solve_task(const TaskSpec& task) {
  validate_task(task);
  switch (task.env_kind) {
    case EnvKind::kCraft:
      return craft_solve(build_craft_instance(task.difficulty, task.gen_seed));
    case EnvKind::kGrid: {
      std::vector<std::string> plan;
      if (grid_search(build_grid_instance(task.difficulty, task.gen_seed),
                      &plan) < 0)
        throw Error(ErrorCode::kInternal, "unsolvable grid task");
      return plan;
    }
    case EnvKind::kHopqa: {
      auto inst = build_hopqa_instance(task.difficulty, task.gen_seed);
      std::vector<std::string> plan;
      for (int i = 0; i < inst.hops(); ++i)
        plan.push_back("search " + inst.chain_relations[i] + " of " +
                       inst.chain_entities[i]);
      plan.push_back("answer " + inst.answer());
      return plan;
    }
    case EnvKind::kBandit:
      return {build_bandit_instance(task.difficulty, task.gen_seed)
                  .winning_action};
  }
  throw Error(ErrorCode::kValidation, "unknown env kind");
}

}  // namespace agentrl

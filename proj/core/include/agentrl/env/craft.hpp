#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agentrl {

struct CraftRecipe {
  std::string output;               // single-token item name, e.g. "copper_gear"
  std::vector<std::string> inputs;  // item names in listed order, repeats allowed
  std::string action;               // "craft copper_gear using copper wax"
};

// A fully deterministic crafting task: a recipe tree of exactly `depth`
// levels rooted at `goal_item`, plus distractor recipes and bases that are
// never needed. Item names are single tokens; bases are bare materials.
struct CraftInstance {
  std::vector<std::string> bases;    // gettable items, listed order
  std::vector<CraftRecipe> recipes;  // tree recipes post-order, then distractors
  std::vector<int> tree_recipes;     // indices of recipes needed for the goal
  std::string goal_item;
  int depth = 1;
};

CraftInstance build_craft_instance(int difficulty, uint64_t gen_seed);

// Minimum turns to hold the goal item: one "get" per required base unit plus
// one "craft" per tree recipe. Exact because every crafted item is demanded
// exactly once and no distractor output ever feeds the goal tree.
int craft_optimal_length(const CraftInstance& inst);
std::vector<std::string> craft_solve(const CraftInstance& inst);

}  // namespace agentrl

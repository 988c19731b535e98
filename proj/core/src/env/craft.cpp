#include "agentrl/env/craft.hpp"

#include <algorithm>
#include <map>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/internal.hpp"

namespace agentrl {
namespace {

constexpr const char* kMaterials[] = {
    "copper", "iron",  "tin",   "oak",   "pine",     "maple", "wool",
    "clay",   "stone", "glass", "amber", "bone",     "coral", "flint",
    "ivory",  "jade",  "wax",   "quartz", "reed",    "slate",
};
constexpr const char* kShapes[] = {
    "gear", "lamp", "frame", "hinge", "rod",  "plate",
    "lens", "axle", "crate", "mask",  "bell", "ring",
};
constexpr int kMaterialCount = std::size(kMaterials);
constexpr int kShapeCount = std::size(kShapes);

// Extra crafted nodes allowed beyond the depth chain itself. Keeps the
// worst-case optimal length at (depth+2) crafts + 2*(depth+2)+1 gets <= 19,
// inside the 20-turn cap for depth 4.
constexpr int kExtraNodeBudget = 2;

std::string make_action(const CraftRecipe& r) {
  std::string a = "craft " + r.output + " using";
  for (const auto& in : r.inputs) a += " " + in;
  return a;
}

struct Builder {
  RngStream rng;
  CraftInstance inst;
  std::vector<std::string> crafted_names;
  int core_bases = 0;  // bases eligible as tree ingredients
  int nodes_left = 0;

  explicit Builder(uint64_t seed) : rng(seed) {}

  std::string fresh_crafted_name() {
    for (;;) {
      std::string name =
          std::string(kMaterials[rng.next_below(kMaterialCount)]) + "_" +
          kShapes[rng.next_below(kShapeCount)];
      if (std::find(crafted_names.begin(), crafted_names.end(), name) ==
          crafted_names.end()) {
        crafted_names.push_back(name);
        return name;
      }
    }
  }

  // Builds the recipe subtree for one item whose tree depth must be exactly
  // `depth`. Recipes are recorded post-order, so the goal recipe comes last
  // among tree recipes. The chain child is built before any optional extras
  // so nodes_left always covers the mandatory chain an extra would need.
  std::string make_node(int depth) {
    --nodes_left;
    std::string output = fresh_crafted_name();
    int n_inputs = rng.next_int(2, 3);
    int chain_slot = depth >= 2 ? rng.next_int(0, n_inputs - 1) : -1;
    std::vector<std::string> inputs(n_inputs);
    if (chain_slot >= 0) inputs[chain_slot] = make_node(depth - 1);
    for (int i = 0; i < n_inputs; ++i) {
      if (i == chain_slot) continue;
      if (depth >= 2 && nodes_left >= 1 && rng.next_bool(0.3)) {
        int extra_depth = rng.next_int(1, std::min(depth - 1, nodes_left));
        inputs[i] = make_node(extra_depth);
      } else {
        inputs[i] = inst.bases[rng.next_below(core_bases)];
      }
    }
    inst.recipes.push_back({output, std::move(inputs), ""});
    return output;
  }

  void build(int difficulty) {
    // Core bases feed the tree; a couple of extra bases are pure decoys.
    core_bases = rng.next_int(3, 4);
    int decoy_bases = rng.next_int(1, 2);
    std::vector<int> picks;
    while (static_cast<int>(picks.size()) < core_bases + decoy_bases) {
      int m = static_cast<int>(rng.next_below(kMaterialCount));
      if (std::find(picks.begin(), picks.end(), m) == picks.end())
        picks.push_back(m);
    }
    for (int m : picks) inst.bases.emplace_back(kMaterials[m]);

    nodes_left = difficulty + kExtraNodeBudget;
    inst.goal_item = make_node(difficulty);
    inst.depth = difficulty;
    for (int i = 0; i < static_cast<int>(inst.recipes.size()); ++i)
      inst.tree_recipes.push_back(i);

    // Distractor recipes may consume anything already defined but their
    // outputs never feed the tree, so they cannot shorten the solution.
    int n_distract = rng.next_int(2, 3);
    for (int k = 0; k < n_distract; ++k) {
      std::string output = fresh_crafted_name();
      int n_inputs = rng.next_int(2, 3);
      std::vector<std::string> inputs(n_inputs);
      for (int i = 0; i < n_inputs; ++i) {
        // crafted_names.back() is this recipe's own output; excluding it
        // keeps the recipe graph acyclic.
        uint64_t pool = inst.bases.size() + crafted_names.size() - 1;
        uint64_t pick = rng.next_below(pool);
        inputs[i] = pick < inst.bases.size()
                        ? inst.bases[pick]
                        : crafted_names[pick - inst.bases.size()];
      }
      inst.recipes.push_back({output, std::move(inputs), ""});
    }

    for (auto& r : inst.recipes) r.action = make_action(r);
  }
};

}  // namespace

CraftInstance build_craft_instance(int difficulty, uint64_t gen_seed) {
  if (difficulty < 1 || difficulty > 4)
    throw Error(ErrorCode::kValidation,
                "craft difficulty must be in [1,4], got " +
                    std::to_string(difficulty));
  Builder b(derive_seed(gen_seed, internal::kCraftSeedTag));
  b.build(difficulty);
  return std::move(b.inst);
}

int craft_optimal_length(const CraftInstance& inst) {
  int gets = 0;
  for (int idx : inst.tree_recipes) {
    for (const auto& in : inst.recipes[idx].inputs) {
      bool is_base = std::find(inst.bases.begin(), inst.bases.end(), in) !=
                     inst.bases.end();
      if (is_base) ++gets;
    }
  }
  return gets + static_cast<int>(inst.tree_recipes.size());
}

std::vector<std::string> craft_solve(const CraftInstance& inst) {
  // Tree recipes are recorded post-order, so children always precede
  // parents: get each recipe's bases, then craft, in that order.
  std::vector<std::string> plan;
  for (int idx : inst.tree_recipes) {
    const auto& r = inst.recipes[idx];
    for (const auto& in : r.inputs) {
      if (std::find(inst.bases.begin(), inst.bases.end(), in) !=
          inst.bases.end())
        plan.push_back("get " + in);
    }
    plan.push_back(r.action);
  }
  return plan;
}

}  // namespace agentrl

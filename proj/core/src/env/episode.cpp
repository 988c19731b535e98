#include "agentrl/env/episode.hpp"

#include <algorithm>
#include <map>

#include "agentrl/common/error.hpp"
#include "agentrl/env/bandit.hpp"
#include "agentrl/env/craft.hpp"
#include "agentrl/env/grid.hpp"
#include "agentrl/env/hopqa.hpp"

namespace agentrl {
namespace {

// Shared bookkeeping: hard turn cap, invalid-action handling, observation
// assembly. Observation text is lowercase and punctuation-free so its tokens
// line up with action tokens under whitespace tokenization.
class BaseEpisode : public Episode {
 public:
  explicit BaseEpisode(int turn_cap) : turn_cap_(turn_cap) {}

  void reset() final {
    turns_used_ = 0;
    done_ = false;
    reset_state();
    obs_ = scene() + " | " + initial_event();
  }

  const std::string& observation() const final { return obs_; }
  bool done() const final { return done_; }

  std::vector<std::string> available_actions() const final {
    if (done_) return {};
    return candidate_actions();
  }

  StepOutcome step(const std::string& action) final {
    if (done_)
      throw Error(ErrorCode::kEpisodeOver, "step on finished episode");
    auto actions = candidate_actions();
    std::string event;
    double reward = 0.0;
    if (std::find(actions.begin(), actions.end(), action) == actions.end()) {
      event = "invalid action";
    } else {
      ActionResult r = apply(action);
      event = std::move(r.event);
      reward = r.reward;
      done_ = r.done;
    }
    ++turns_used_;
    if (!done_ && turns_used_ >= turn_cap_) {
      done_ = true;
      event += " | out of turns";
    }
    obs_ = scene() + " | " + event;
    return {obs_, reward, done_};
  }

 protected:
  struct ActionResult {
    std::string event;
    double reward = 0.0;
    bool done = false;
  };

  virtual void reset_state() = 0;
  virtual std::string scene() const = 0;
  virtual std::string initial_event() const = 0;
  virtual std::vector<std::string> candidate_actions() const = 0;
  // pre: action is one of candidate_actions().
  virtual ActionResult apply(const std::string& action) = 0;

 private:
  int turn_cap_;
  int turns_used_ = 0;
  bool done_ = false;
  std::string obs_;
};

class CraftEpisode : public BaseEpisode {
 public:
  explicit CraftEpisode(CraftInstance inst)
      : BaseEpisode(20), inst_(std::move(inst)) {}

 protected:
  void reset_state() override { inventory_.clear(); }

  std::string scene() const override {
    std::string bases = "bases";
    for (const auto& b : inst_.bases) bases += " " + b;
    std::string inv = "inventory";
    if (inventory_.empty()) {
      inv += " empty";
    } else {
      for (const auto& [item, n] : inventory_)
        inv += " " + std::to_string(n) + "x" + item;
    }
    return "goal craft " + inst_.goal_item + " | " + bases + " | " + inv;
  }

  std::string initial_event() const override { return "you look around"; }

  std::vector<std::string> candidate_actions() const override {
    std::vector<std::string> actions = {"inventory"};
    for (const auto& b : inst_.bases) actions.push_back("get " + b);
    for (const auto& r : inst_.recipes) actions.push_back(r.action);
    return actions;
  }

  ActionResult apply(const std::string& action) override {
    if (action == "inventory") {
      std::string held = "you hold";
      if (inventory_.empty()) held += " nothing";
      for (const auto& [item, n] : inventory_)
        held += " " + std::to_string(n) + "x" + item;
      return {held, 0.0, false};
    }
    if (action.rfind("get ", 0) == 0) {
      std::string base = action.substr(4);
      ++inventory_[base];
      return {"you got " + base, 0.0, false};
    }
    for (const auto& r : inst_.recipes) {
      if (action != r.action) continue;
      std::map<std::string, int> need;
      for (const auto& in : r.inputs) ++need[in];
      std::string missing;
      for (const auto& [item, n] : need) {
        auto it = inventory_.find(item);
        if (it == inventory_.end() || it->second < n) missing += " " + item;
      }
      if (!missing.empty())
        return {"cannot craft " + r.output + " | missing" + missing, 0.0,
                false};
      for (const auto& [item, n] : need) {
        inventory_[item] -= n;
        if (inventory_[item] == 0) inventory_.erase(item);
      }
      ++inventory_[r.output];
      if (r.output == inst_.goal_item)
        return {"you crafted " + r.output + " | goal complete", 1.0, true};
      return {"you crafted " + r.output, 0.0, false};
    }
    throw Error(ErrorCode::kInternal, "unreachable craft action: " + action);
  }

 private:
  CraftInstance inst_;
  std::map<std::string, int> inventory_;  // ordered for stable display
};

class GridEpisode : public BaseEpisode {
 public:
  explicit GridEpisode(GridInstance inst)
      : BaseEpisode(20), inst_(std::move(inst)) {}

 protected:
  void reset_state() override {
    pose_ = {inst_.start_x, inst_.start_y, inst_.start_facing};
  }

  std::string scene() const override {
    static const char* kFacing[] = {"north", "east", "south", "west"};
    const auto& goal = inst_.objects[inst_.goal_object];
    std::string s = "goal go to the " + goal.color + " " + goal.kind;
    s += " | you are at " + std::to_string(pose_.x) + " " +
         std::to_string(pose_.y) + " facing " + kFacing[pose_.facing];
    int ax = pose_.x, ay = pose_.y;
    static const int dx[] = {0, 1, 0, -1}, dy[] = {-1, 0, 1, 0};
    ax += dx[pose_.facing];
    ay += dy[pose_.facing];
    s += " | ahead ";
    if (!inst_.in_bounds(ax, ay)) {
      s += "edge";
    } else if (inst_.is_wall(ax, ay)) {
      s += "wall";
    } else if (int oi = inst_.object_at(ax, ay); oi >= 0) {
      s += inst_.objects[oi].color + " " + inst_.objects[oi].kind;
    } else {
      s += "open";
    }
    s += " | you see";
    for (const auto& o : inst_.objects)
      s += " " + o.color + " " + o.kind + " at " + std::to_string(o.x) + " " +
           std::to_string(o.y);
    return s;
  }

  std::string initial_event() const override { return "you look around"; }

  std::vector<std::string> candidate_actions() const override {
    return grid_actions(inst_, pose_);
  }

  ActionResult apply(const std::string& action) override {
    GridMove move = grid_apply(inst_, pose_, action);
    pose_ = move.pose;
    if (move.success) {
      const auto& goal = inst_.objects[inst_.goal_object];
      return {move.event + " | you reached the " + goal.color + " " +
                  goal.kind + " | goal complete",
              1.0, true};
    }
    return {move.event, 0.0, false};
  }

 private:
  GridInstance inst_;
  GridPose pose_;
};

class HopqaEpisode : public BaseEpisode {
 public:
  explicit HopqaEpisode(HopqaInstance inst)
      : BaseEpisode(4), inst_(std::move(inst)) {}

 protected:
  void reset_state() override {
    discovered_ = {inst_.chain_entities[0]};
  }

  std::string scene() const override { return "question " + inst_.question; }

  std::string initial_event() const override { return "no results yet"; }

  std::vector<std::string> candidate_actions() const override {
    std::vector<std::string> actions;
    for (const auto& e : discovered_)
      for (const auto& r : inst_.chain_relations)
        actions.push_back("search " + r + " of " + e);
    for (const auto& e : discovered_) actions.push_back("answer " + e);
    return actions;
  }

  ActionResult apply(const std::string& action) override {
    if (action.rfind("answer ", 0) == 0) {
      std::string entity = action.substr(7);
      if (entity == inst_.answer())
        return {"correct the answer is " + entity + " | goal complete", 1.0,
                true};
      return {"wrong answer", 0.0, true};
    }
    // "search <relation> of <entity>"
    size_t of = action.find(" of ");
    std::string relation = action.substr(7, of - 7);
    std::string entity = action.substr(of + 4);
    auto results = hopqa_search(inst_, relation, entity);
    if (results.empty()) return {"results none", 0.0, false};
    std::string event = "results";
    for (const auto& r : results) {
      event += " " + r;
      if (std::find(discovered_.begin(), discovered_.end(), r) ==
          discovered_.end())
        discovered_.push_back(r);
    }
    return {event, 0.0, false};
  }

 private:
  HopqaInstance inst_;
  std::vector<std::string> discovered_;  // order of first appearance
};

class BanditEpisode : public BaseEpisode {
 public:
  explicit BanditEpisode(BanditInstance inst)
      : BaseEpisode(1), inst_(std::move(inst)) {}

 protected:
  void reset_state() override {}

  std::string scene() const override {
    return "goal pull the winning lever | two levers before you";
  }

  std::string initial_event() const override { return "choose"; }

  std::vector<std::string> candidate_actions() const override {
    return {"pull lever a", "pull lever b"};
  }

  ActionResult apply(const std::string& action) override {
    if (action == inst_.winning_action)
      return {"the lever pays out | goal complete", 1.0, true};
    return {"nothing happens", 0.0, true};
  }

 private:
  BanditInstance inst_;
};

}  // namespace

std::unique_ptr<Episode> make_episode(const TaskSpec& task, uint64_t seed) {
  validate_task(task);
  (void)seed;  // dynamics are deterministic; groups differ only via sampling
  switch (task.env_kind) {
    case EnvKind::kCraft:
      return std::make_unique<CraftEpisode>(
          build_craft_instance(task.difficulty, task.gen_seed));
    case EnvKind::kGrid:
      return std::make_unique<GridEpisode>(
          build_grid_instance(task.difficulty, task.gen_seed));
    case EnvKind::kHopqa:
      return std::make_unique<HopqaEpisode>(
          build_hopqa_instance(task.difficulty, task.gen_seed));
    case EnvKind::kBandit:
      return std::make_unique<BanditEpisode>(
          build_bandit_instance(task.difficulty, task.gen_seed));
  }
  throw Error(ErrorCode::kValidation, "unknown env kind");
}

}  // namespace agentrl

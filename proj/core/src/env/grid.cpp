#include "agentrl/env/grid.hpp"

#include <algorithm>
#include <deque>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/internal.hpp"

namespace agentrl {
namespace {

constexpr const char* kColors[] = {"red",    "blue", "green",
                                   "yellow", "grey", "purple"};
constexpr const char* kKinds[] = {"ball", "key", "box", "cube", "lamp", "disc"};

constexpr int kDx[] = {0, 1, 0, -1};  // north, east, south, west
constexpr int kDy[] = {-1, 0, 1, 0};

// Generation keeps retrying layouts until the task is solvable comfortably
// inside the 20-turn cap.
constexpr int kMaxSearchTurns = 18;
constexpr int kMaxLayoutAttempts = 200;

bool occupied(const GridInstance& inst, int x, int y) {
  return inst.is_wall(x, y) || inst.object_at(x, y) >= 0;
}

bool sight_line(const GridInstance& inst, int ax, int ay, int ox, int oy) {
  if (ax == ox && ay == oy) return false;
  if (ax != ox && ay != oy) return false;
  int dx = (ox > ax) - (ox < ax);
  int dy = (oy > ay) - (oy < ay);
  for (int x = ax + dx, y = ay + dy; x != ox || y != oy; x += dx, y += dy)
    if (occupied(inst, x, y)) return false;
  return true;
}

bool adjacent(int ax, int ay, const GridObject& o) {
  return std::abs(ax - o.x) + std::abs(ay - o.y) == 1;
}

std::string object_phrase(const GridObject& o) {
  return o.color + " " + o.kind;
}

int facing_toward(int ax, int ay, int ox, int oy) {
  if (oy < ay) return 0;
  if (ox > ax) return 1;
  if (oy > ay) return 2;
  return 3;
}

}  // namespace

int GridInstance::object_at(int x, int y) const {
  for (int i = 0; i < static_cast<int>(objects.size()); ++i)
    if (objects[i].x == x && objects[i].y == y) return i;
  return -1;
}

std::vector<std::string> grid_actions(const GridInstance& inst,
                                      const GridPose& pose) {
  std::vector<std::string> actions = {"turn left", "turn right",
                                      "move forward"};
  for (const auto& o : inst.objects)
    if (sight_line(inst, pose.x, pose.y, o.x, o.y))
      actions.push_back("go to the " + object_phrase(o));
  return actions;
}

GridMove grid_apply(const GridInstance& inst, const GridPose& pose,
                    const std::string& action) {
  const GridObject& goal = inst.objects[inst.goal_object];
  GridMove out{pose, "", false};
  if (action == "turn left") {
    out.pose.facing = (pose.facing + 3) % 4;
    out.event = "you turn left";
    return out;
  }
  if (action == "turn right") {
    out.pose.facing = (pose.facing + 1) % 4;
    out.event = "you turn right";
    return out;
  }
  if (action == "move forward") {
    int nx = pose.x + kDx[pose.facing];
    int ny = pose.y + kDy[pose.facing];
    if (!inst.in_bounds(nx, ny) || occupied(inst, nx, ny)) {
      out.event = "you bump into something";
    } else {
      out.pose.x = nx;
      out.pose.y = ny;
      out.event = "you move forward";
    }
    out.success = adjacent(out.pose.x, out.pose.y, goal);
    return out;
  }
  // "go to the <color> <kind>": walk the sight line and stop one cell short.
  for (const auto& o : inst.objects) {
    if (action != "go to the " + object_phrase(o)) continue;
    if (!sight_line(inst, pose.x, pose.y, o.x, o.y))
      throw Error(ErrorCode::kInternal, "go-to offered without sight line");
    int dx = (o.x > pose.x) - (o.x < pose.x);
    int dy = (o.y > pose.y) - (o.y < pose.y);
    out.pose.x = o.x - dx;
    out.pose.y = o.y - dy;
    out.pose.facing = facing_toward(out.pose.x, out.pose.y, o.x, o.y);
    out.event = "you walk to the " + object_phrase(o);
    out.success = adjacent(out.pose.x, out.pose.y, goal);
    return out;
  }
  throw Error(ErrorCode::kInternal, "grid_apply on unlisted action: " + action);
}

int grid_search(const GridInstance& inst, std::vector<std::string>* plan) {
  const int n = inst.width * inst.height * 4;
  auto key = [&](const GridPose& p) {
    return (p.y * inst.width + p.x) * 4 + p.facing;
  };
  std::vector<int> parent(n, -2);  // -2 unvisited, -1 root
  std::vector<std::string> via(n);
  GridPose start{inst.start_x, inst.start_y, inst.start_facing};
  parent[key(start)] = -1;
  std::deque<std::pair<GridPose, int>> queue{{start, 0}};
  while (!queue.empty()) {
    auto [pose, dist] = queue.front();
    queue.pop_front();
    for (const auto& action : grid_actions(inst, pose)) {
      GridMove move = grid_apply(inst, pose, action);
      if (move.success) {
        if (plan) {
          plan->clear();
          plan->push_back(action);
          for (int k = key(pose); parent[k] >= 0; ) {
            plan->push_back(via[k]);
            k = parent[k];
          }
          std::reverse(plan->begin(), plan->end());
        }
        return dist + 1;
      }
      int k = key(move.pose);
      if (parent[k] != -2) continue;
      parent[k] = key(pose);
      via[k] = action;
      queue.emplace_back(move.pose, dist + 1);
    }
  }
  return -1;
}

GridInstance build_grid_instance(int difficulty, uint64_t gen_seed) {
  if (difficulty < 1 || difficulty > 3)
    throw Error(ErrorCode::kValidation,
                "grid difficulty must be in [1,3], got " +
                    std::to_string(difficulty));
  RngStream rng(derive_seed(gen_seed, internal::kGridSeedTag));
  const int size = 3 + 2 * difficulty;       // 5, 7, 9
  const int n_walls = 4 * (difficulty - 1);  // 0, 4, 8
  const int n_objects = 2 * difficulty;      // 2, 4, 6

  for (int attempt = 0; attempt < kMaxLayoutAttempts; ++attempt) {
    GridInstance inst;
    inst.width = size;
    inst.height = size;
    inst.wall.assign(size * size, 0);
    for (int w = 0; w < n_walls; ++w) {
      int cell = static_cast<int>(rng.next_below(size * size));
      inst.wall[cell] = 1;
    }

    // Distinct (color, kind) labels on distinct free cells.
    std::vector<int> labels;
    while (static_cast<int>(labels.size()) < n_objects) {
      int label = static_cast<int>(rng.next_below(36));
      if (std::find(labels.begin(), labels.end(), label) == labels.end())
        labels.push_back(label);
    }
    bool placed = true;
    for (int label : labels) {
      GridObject o{kColors[label / 6], kKinds[label % 6], 0, 0};
      int tries = 0;
      do {
        int cell = static_cast<int>(rng.next_below(size * size));
        o.x = cell % size;
        o.y = cell / size;
      } while (occupied(inst, o.x, o.y) && ++tries < 50);
      if (occupied(inst, o.x, o.y)) {
        placed = false;
        break;
      }
      inst.objects.push_back(o);
    }
    if (!placed) continue;

    int tries = 0;
    do {
      int cell = static_cast<int>(rng.next_below(size * size));
      inst.start_x = cell % size;
      inst.start_y = cell / size;
    } while (occupied(inst, inst.start_x, inst.start_y) && ++tries < 50);
    if (occupied(inst, inst.start_x, inst.start_y)) continue;
    inst.start_facing = static_cast<int>(rng.next_below(4));
    inst.goal_object = static_cast<int>(rng.next_below(n_objects));

    int optimal = grid_search(inst, nullptr);
    if (optimal >= 1 && optimal <= kMaxSearchTurns) return inst;
  }
  throw Error(ErrorCode::kInternal, "grid generator exhausted layout attempts");
}

}  // namespace agentrl

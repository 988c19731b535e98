#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agentrl {

struct GridObject {
  std::string color;
  std::string kind;
  int x = 0;
  int y = 0;
};

// A room with walls, labelled objects, and one goal object. The agent moves
// with turn/move primitives plus a "go to <obj>" macro that is offered only
// when the object is in line of sight (same row or column, nothing between).
struct GridInstance {
  int width = 5;
  int height = 5;
  std::vector<uint8_t> wall;  // row-major width*height, 1 = wall
  std::vector<GridObject> objects;
  int goal_object = 0;
  int start_x = 0;
  int start_y = 0;
  int start_facing = 0;  // 0=north 1=east 2=south 3=west

  bool is_wall(int x, int y) const { return wall[y * width + x] != 0; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  int object_at(int x, int y) const;  // index or -1
};

struct GridPose {
  int x = 0;
  int y = 0;
  int facing = 0;

  bool operator==(const GridPose&) const = default;
};

GridInstance build_grid_instance(int difficulty, uint64_t gen_seed);

// Transition dynamics shared by the live episode and the search oracle, so
// the oracle can never drift from what the environment actually does.
std::vector<std::string> grid_actions(const GridInstance& inst,
                                      const GridPose& pose);
struct GridMove {
  GridPose pose;
  std::string event;
  bool success = false;  // 4-adjacent to the goal after a move/go-to
};
GridMove grid_apply(const GridInstance& inst, const GridPose& pose,
                    const std::string& action);

// Breadth-first search over (x, y, facing). Returns the minimum number of
// turns to success, or -1 if unreachable; fills `plan` when non-null.
int grid_search(const GridInstance& inst, std::vector<std::string>* plan);

}  // namespace agentrl

#include "agentrl/rollout/trajectory.hpp"

#include <fstream>
#include <sstream>

#include "agentrl/common/error.hpp"
#include "agentrl/protocol/codec.hpp"
#include "nlohmann/json.hpp"

namespace agentrl {
namespace {

using ordered_json = nlohmann::ordered_json;

// Observations and actions are single-line by construction; flatten anyway so
// a stray newline cannot shift the policy's line-based history window.
void append_flat(std::string& out, std::string_view text) {
  for (char c : text) out.push_back(c == '\n' ? ' ' : c);
}

}  // namespace

std::string turn_history_text(std::span<const Turn> turns,
                              std::string_view pending_observation) {
  std::string out;
  size_t size = pending_observation.size();
  for (const Turn& turn : turns)
    size += turn.observation.size() + turn.action.size() + 5;
  out.reserve(size);
  for (const Turn& turn : turns) {
    append_flat(out, turn.observation);
    out += " => ";
    append_flat(out, turn.action);
    out.push_back('\n');
  }
  append_flat(out, pending_observation);
  return out;
}

std::string history_before_turn(const Trajectory& trajectory, size_t index) {
  if (index >= trajectory.turns.size())
    throw Error(ErrorCode::kValidation, "turn index out of range");
  return turn_history_text(
      std::span<const Turn>(trajectory.turns.data(), index),
      trajectory.turns[index].observation);
}

void ensure_candidate_features(Trajectory& trajectory) {
  for (size_t i = 0; i < trajectory.turns.size(); ++i) {
    Turn& turn = trajectory.turns[i];
    if (!turn.candidate_features.empty()) continue;
    if (turn.candidates.actions.empty())
      throw Error(ErrorCode::kValidation,
                  "turn has no recorded candidates to featurize");
    std::string history = history_before_turn(trajectory, i);
    turn.candidate_features.reserve(turn.candidates.actions.size());
    for (const auto& action : turn.candidates.actions)
      turn.candidate_features.push_back(featurize(history, action));
  }
}

std::string trajectory_to_json(const Trajectory& trajectory) {
  ordered_json doc;
  doc["task"] = ordered_json::parse(task_to_json(trajectory.task));
  doc["seed"] = trajectory.seed;
  doc["outcome_reward"] = trajectory.outcome_reward;
  doc["truncated"] = trajectory.truncated;
  ordered_json turns = ordered_json::array();
  for (const Turn& turn : trajectory.turns) {
    ordered_json t;
    t["observation"] = turn.observation;
    t["action"] = turn.action;
    t["log_prob"] = turn.log_prob;
    t["chosen_index"] = turn.chosen_index;
    t["candidates"] = turn.candidates.actions;
    turns.push_back(std::move(t));
  }
  doc["turns"] = std::move(turns);
  return doc.dump();
}

Trajectory trajectory_from_json(const std::string& line) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(line);
    Trajectory out;
    out.task = task_from_json(doc.at("task").dump());
    out.seed = doc.at("seed").get<uint64_t>();
    out.outcome_reward = doc.at("outcome_reward").get<double>();
    out.truncated = doc.at("truncated").get<bool>();
    for (const auto& t : doc.at("turns")) {
      Turn turn;
      turn.observation = t.at("observation").get<std::string>();
      turn.action = t.at("action").get<std::string>();
      turn.log_prob = t.at("log_prob").get<double>();
      turn.chosen_index = t.at("chosen_index").get<uint32_t>();
      turn.candidates.actions =
          t.at("candidates").get<std::vector<std::string>>();
      out.turns.push_back(std::move(turn));
    }
    return out;
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed trajectory record: ") + e.what());
  }
}

void write_trajectories(const std::filesystem::path& path,
                        std::span<const Trajectory> trajectories) {
  std::ofstream file(path, std::ios::trunc);
  if (!file)
    throw Error(ErrorCode::kValidation,
                "cannot open for writing: " + path.string());
  for (const Trajectory& trajectory : trajectories)
    file << trajectory_to_json(trajectory) << '\n';
  if (!file)
    throw Error(ErrorCode::kInternal, "short write to " + path.string());
}

std::vector<Trajectory> read_trajectories(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file)
    throw Error(ErrorCode::kNotFound, "no such file: " + path.string());
  std::vector<Trajectory> out;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    out.push_back(trajectory_from_json(line));
  }
  return out;
}

}  // namespace agentrl

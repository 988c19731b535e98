#include "agentrl/algo/baseline.hpp"

#include <cmath>

#include "agentrl/common/error.hpp"

namespace agentrl {
namespace {

// (X^T X + ridge I) w, using the sparse rows twice.
std::vector<double> normal_apply(std::span<const FeatureVector> rows,
                                 std::span<const double> w, double ridge) {
  std::vector<double> out(w.size(), 0.0);
  for (const FeatureVector& row : rows) {
    double xw = row.dot(w);
    for (const auto& [index, value] : row.entries) out[index] += value * xw;
  }
  for (size_t k = 0; k < w.size(); ++k) out[k] += ridge * w[k];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

}  // namespace

FeatureVector state_features(const Trajectory& trajectory, size_t index) {
  return featurize(history_before_turn(trajectory, index), "");
}

ValueBaseline fit_value_baseline(std::span<const FeatureVector> rows,
                                 std::span<const double> targets, uint32_t dim,
                                 double ridge, double tolerance,
                                 int max_iterations) {
  if (rows.empty())
    throw Error(ErrorCode::kValidation, "value fit needs at least one row");
  if (rows.size() != targets.size())
    throw Error(ErrorCode::kValidation, "row/target count mismatch");
  if (!(ridge >= 0.0) || !(tolerance > 0.0) || max_iterations < 1)
    throw Error(ErrorCode::kValidation, "bad value fit parameters");
  for (const FeatureVector& row : rows)
    for (const auto& [index, value] : row.entries)
      if (index >= dim)
        throw Error(ErrorCode::kValidation, "feature index out of range");

  // b = X^T y
  std::vector<double> b(dim, 0.0);
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [index, value] : rows[i].entries)
      b[index] += value * targets[i];

  ValueBaseline baseline;
  baseline.weights.assign(dim, 0.0);
  std::vector<double> residual = b;  // r = b - A*0
  std::vector<double> direction = residual;
  double rs = dot(residual, residual);
  double threshold = tolerance * std::max(1.0, std::sqrt(dot(b, b)));
  for (int it = 0; it < max_iterations && std::sqrt(rs) > threshold; ++it) {
    std::vector<double> ad = normal_apply(rows, direction, ridge);
    double denom = dot(direction, ad);
    if (!(denom > 0.0)) break;  // flat direction: system is solved or singular
    double alpha = rs / denom;
    for (size_t k = 0; k < baseline.weights.size(); ++k) {
      baseline.weights[k] += alpha * direction[k];
      residual[k] -= alpha * ad[k];
    }
    double rs_next = dot(residual, residual);
    double beta = rs_next / rs;
    rs = rs_next;
    for (size_t k = 0; k < direction.size(); ++k)
      direction[k] = residual[k] + beta * direction[k];
  }
  for (double w : baseline.weights)
    if (!std::isfinite(w))
      throw Error(ErrorCode::kNumeric, "value fit diverged");
  return baseline;
}

ValueBaseline fit_value_baseline(std::span<const TrajectoryGroup> groups,
                                 double ridge, double tolerance,
                                 int max_iterations) {
  std::vector<FeatureVector> rows;
  std::vector<double> targets;
  for (const TrajectoryGroup& group : groups) {
    for (const Trajectory& trajectory : group) {
      for (size_t i = 0; i < trajectory.turns.size(); ++i) {
        rows.push_back(state_features(trajectory, i));
        targets.push_back(trajectory.outcome_reward);
      }
    }
  }
  return fit_value_baseline(rows, targets, kFeatureDim, ridge, tolerance,
                            max_iterations);
}

}  // namespace agentrl

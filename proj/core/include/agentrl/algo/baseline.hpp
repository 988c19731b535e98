#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agentrl/policy/feature.hpp"
#include "agentrl/rollout/trajectory.hpp"

namespace agentrl {

// Linear value head over state features, fit per batch.
struct ValueBaseline {
  std::vector<double> weights;

  double value(const FeatureVector& features) const {
    return features.dot(weights);
  }
};

// The state half of the feature map: policy features of the observation
// history before turn `index`, with no action attached.
FeatureVector state_features(const Trajectory& trajectory, size_t index);

// Ridge least-squares weights for features -> target, solved by conjugate
// gradients on the normal equations until the residual falls to `tolerance`
// relative to the right-hand side.
ValueBaseline fit_value_baseline(std::span<const FeatureVector> rows,
                                 std::span<const double> targets, uint32_t dim,
                                 double ridge = 1e-6, double tolerance = 1e-8,
                                 int max_iterations = 256);

// One regression row per visited turn, target = that trajectory's outcome
// reward; this is the value fit used by the clipped-update baseline.
ValueBaseline fit_value_baseline(std::span<const TrajectoryGroup> groups,
                                 double ridge = 1e-6, double tolerance = 1e-8,
                                 int max_iterations = 256);

}  // namespace agentrl

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "agentrl/algo/advantage.hpp"
#include "agentrl/algo/baseline.hpp"
#include "agentrl/algo/update.hpp"
#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/protocol/service.hpp"
#include "agentrl/rollout/collector.hpp"
#include "agentrl/rollout/pool.hpp"
#include "doctest.h"

using namespace agentrl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Policy random_policy(uint64_t seed, double scale = 0.1) {
  Policy policy = make_policy(kFeatureDim);
  RngStream rng(seed);
  for (double& w : policy.theta) w = scale * (rng.next_double() - 0.5);
  return policy;
}

std::vector<TrajectoryGroup> collect_bandit_batch(const Policy& policy,
                                                  int n_tasks, int group_size,
                                                  uint64_t batch_seed) {
  RolloutPool pool(in_process_factory(std::make_shared<EnvService>()), 4);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < n_tasks; ++i)
    tasks.push_back(generate_task(EnvKind::kBandit, 1,
                                  derive_seed(batch_seed, 1000 + i)));
  return collect_batch(pool, policy, tasks, batch_seed, group_size, 1);
}

std::vector<TrajectoryGroup> collect_craft_batch(const Policy& policy,
                                                 int n_tasks, int group_size,
                                                 uint64_t batch_seed) {
  RolloutPool pool(in_process_factory(std::make_shared<EnvService>()), 4);
  std::vector<TaskSpec> tasks;
  for (int i = 0; i < n_tasks; ++i)
    tasks.push_back(generate_task(EnvKind::kCraft, 1 + i % 2,
                                  derive_seed(batch_seed, 2000 + i)));
  return collect_batch(pool, policy, tasks, batch_seed, group_size, 10);
}

// One hand-built single-turn trajectory over two candidate actions, with the
// behavior probabilities pinned by the test.
Trajectory synthetic_turn(double p_old_chosen, uint32_t chosen) {
  Trajectory trajectory;
  trajectory.task = TaskSpec{EnvKind::kBandit, 1, 0, "pull the winning lever"};
  Turn turn;
  turn.observation = "one armed room";
  turn.candidates.actions = {"pull lever a", "pull lever b"};
  turn.chosen_index = chosen;
  turn.action = turn.candidates.actions[chosen];
  for (const auto& action : turn.candidates.actions)
    turn.candidate_features.push_back(featurize(turn.observation, action));
  turn.probs = {0.0, 0.0};
  turn.probs[chosen] = p_old_chosen;
  turn.probs[1 - chosen] = 1.0 - p_old_chosen;
  turn.log_prob = std::log(p_old_chosen);
  trajectory.turns.push_back(std::move(turn));
  return trajectory;
}

double l2(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("group-normalized advantages: hand value and invariants") {
  std::vector<double> rewards = {1.0, 0.0, 0.0, 1.0};
  auto adv = grpo_advantages(rewards);
  // mean 0.5, population std 0.5
  CHECK(adv[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(adv[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(adv[2] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(adv[3] == doctest::Approx(1.0).epsilon(1e-6));

  // Identical rewards: no signal, all-zero advantages.
  for (double adv_i : grpo_advantages(std::vector<double>{1.0, 1.0, 1.0}))
    CHECK(adv_i == 0.0);

  // Normalized advantages always sum to zero.
  RngStream rng(derive_seed(201, 0));
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r;
    int n = rng.next_int(2, 8);
    for (int i = 0; i < n; ++i) r.push_back(rng.next_bool(0.4) ? 1.0 : 0.0);
    auto a = grpo_advantages(r);
    double sum = 0.0;
    for (double x : a) sum += x;
    CHECK(std::abs(sum) < 1e-9);
  }

  CHECK_THROWS_AS((void)grpo_advantages(std::vector<double>{1.0}), Error);
}

TEST_CASE("leave-one-out advantages: hand value and closed form") {
  std::vector<double> rewards = {1.0, 0.0, 0.0, 0.0};
  auto adv = rloo_advantages(rewards);
  CHECK(adv[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(adv[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(adv[2] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(adv[3] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  // r_i - mean_{j != i} r_j == (G/(G-1)) (r_i - mean).
  RngStream rng(derive_seed(202, 0));
  for (int trial = 0; trial < 1000; ++trial) {
    int n = rng.next_int(2, 9);
    std::vector<double> r;
    for (int i = 0; i < n; ++i) r.push_back(rng.next_double());
    auto a = rloo_advantages(r);
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= n;
    for (int i = 0; i < n; ++i) {
      double identity = (static_cast<double>(n) / (n - 1)) * (r[i] - mean);
      CHECK(std::abs(a[i] - identity) <= 1e-12);
    }
  }

  CHECK_THROWS_AS((void)rloo_advantages(std::vector<double>{0.5}), Error);
}

TEST_CASE("batch-wide normalization: hand value and single-group equality") {
  std::vector<std::vector<double>> groups = {{1.0, 1.0}, {0.0, 0.0}};
  auto adv = reinforcepp_advantages(groups);
  CHECK(adv[0][0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(adv[0][1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(adv[1][0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(adv[1][1] == doctest::Approx(-1.0).epsilon(1e-6));

  // On a single group it coincides with the group-relative estimator.
  RngStream rng(derive_seed(203, 0));
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.next_int(2, 8);
    std::vector<double> r;
    for (int i = 0; i < n; ++i) r.push_back(rng.next_double());
    auto single = reinforcepp_advantages(
        std::vector<std::vector<double>>{r});
    auto grouped = grpo_advantages(r);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(single[0][i] - grouped[i]) <= 1e-15);
  }
}

TEST_CASE("value fit: shared state averages its targets") {
  FeatureVector phi = featurize("goal craft widget | inventory empty", "");
  std::vector<FeatureVector> rows = {phi, phi};
  std::vector<double> targets = {0.0, 1.0};
  ValueBaseline baseline =
      fit_value_baseline(rows, targets, kFeatureDim);
  CHECK(baseline.value(phi) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("value fit matches a dense direct solve") {
  // Small system solved independently by Gaussian elimination.
  const uint32_t dim = 6;
  RngStream rng(derive_seed(204, 0));
  std::vector<FeatureVector> rows;
  std::vector<double> targets;
  for (int i = 0; i < 12; ++i) {
    FeatureVector row;
    for (uint32_t k = 0; k < dim; ++k)
      if (rng.next_bool(0.6))
        row.entries.emplace_back(k, 1.0 + rng.next_double());
    if (row.entries.empty()) row.entries.emplace_back(0, 1.0);
    rows.push_back(row);
    targets.push_back(rng.next_double());
  }
  double ridge = 1e-2;  // floors the condition number for a tight comparison
  ValueBaseline cg = fit_value_baseline(rows, targets, dim, ridge, 1e-12, 500);

  // A = X^T X + ridge I, b = X^T y, dense.
  std::vector<std::vector<double>> a(dim, std::vector<double>(dim, 0.0));
  std::vector<double> b(dim, 0.0);
  std::vector<std::vector<double>> dense_rows(rows.size(),
                                              std::vector<double>(dim, 0.0));
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [index, value] : rows[i].entries)
      dense_rows[i][index] = value;
  for (size_t i = 0; i < rows.size(); ++i)
    for (uint32_t p = 0; p < dim; ++p) {
      b[p] += dense_rows[i][p] * targets[i];
      for (uint32_t q = 0; q < dim; ++q)
        a[p][q] += dense_rows[i][p] * dense_rows[i][q];
    }
  for (uint32_t p = 0; p < dim; ++p) a[p][p] += ridge;
  // Gaussian elimination with partial pivoting.
  for (uint32_t col = 0; col < dim; ++col) {
    uint32_t pivot = col;
    for (uint32_t r = col + 1; r < dim; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (uint32_t r = 0; r < dim; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (uint32_t c = col; c < dim; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (uint32_t k = 0; k < dim; ++k)
    CHECK(cg.weights[k] == doctest::Approx(b[k] / a[k][k]).epsilon(1e-7));
}

TEST_CASE("algorithm names round-trip") {
  for (Algorithm algorithm :
       {Algorithm::kPg, Algorithm::kGrpo, Algorithm::kRloo,
        Algorithm::kReinforcePp, Algorithm::kPpo})
    CHECK(algorithm_from_string(to_string(algorithm)) == algorithm);
  CHECK(algorithm_from_string("reinforce++") == Algorithm::kReinforcePp);
  CHECK_THROWS_AS((void)algorithm_from_string("sarsa"), Error);
}

TEST_CASE("update config validation") {
  UpdateConfig config;
  CHECK_NOTHROW(config.validate());
  UpdateConfig bad = config;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = config;
  bad.clip_epsilon = -0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = config;
  bad.group_size = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = config;
  bad.ppo_epochs = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = config;
  bad.kl_coefficient = -1e-3;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("parameter updates are exact, and refuse non-finite results") {
  Policy policy = make_policy(4);
  policy.theta = {1.0, -2.0, 0.5, 0.0};
  std::vector<double> gradient = {0.5, 0.25, -1.0, 3.0};
  apply_update(policy, gradient, 1e-3);
  CHECK(policy.theta[0] == 1.0 + 1e-3 * 0.5);
  CHECK(policy.theta[1] == -2.0 + 1e-3 * 0.25);
  CHECK(policy.theta[2] == 0.5 + 1e-3 * -1.0);
  CHECK(policy.theta[3] == 0.0 + 1e-3 * 3.0);

  std::vector<double> zero(4, 0.0);
  Policy before = policy;
  apply_update(policy, zero, 0.1);
  CHECK(policy.theta == before.theta);

  std::vector<double> poisoned = {0.0, std::nan(""), 0.0, 0.0};
  bool thrown = false;
  try {
    apply_update(policy, poisoned, 0.1);
  } catch (const Error& e) {
    thrown = true;
    CHECK(e.code() == ErrorCode::kNumeric);
  }
  CHECK(thrown);
  CHECK(policy.theta == before.theta);  // untouched on failure

  CHECK_THROWS_AS(apply_update(policy, std::vector<double>(3, 0.0), 0.1),
                  Error);
}

TEST_CASE("on-policy clipped gradient equals the plain REINFORCE gradient") {
  Policy policy = random_policy(derive_seed(205, 0), 0.2);
  auto groups = collect_craft_batch(policy, 3, 4, 77);
  // Rewards as advantages, no clip, no anchor: this must agree with the
  // text-level REINFORCE estimator computed by an independent code path.
  std::vector<std::vector<double>> advantages;
  for (const auto& group : groups) {
    advantages.emplace_back();
    for (const auto& trajectory : group)
      advantages.back().push_back(trajectory.outcome_reward);
  }
  auto fast = clipped_surrogate_gradient(policy, policy, groups, advantages,
                                         kInf, 0.0);
  auto slow = vanilla_pg_gradient(policy, groups);
  REQUIRE(fast.size() == slow.size());
  double worst = 0.0;
  for (size_t k = 0; k < fast.size(); ++k)
    worst = std::max(worst, std::abs(fast[k] - slow[k]));
  CHECK(worst <= 1e-10);

  // Clipping at epsilon=0.2 changes nothing while the data is on-policy
  // (every ratio is exactly 1).
  auto clipped = clipped_surrogate_gradient(policy, policy, groups, advantages,
                                            0.2, 0.0);
  for (size_t k = 0; k < fast.size(); ++k)
    CHECK(clipped[k] == fast[k]);
}

TEST_CASE("the clip gate zeroes off-policy turns on the flat branch") {
  Policy policy = make_policy(kFeatureDim);  // uniform: p_cur = 0.5 each
  // Behavior probability 0.25 for the chosen arm -> ratio 2 > 1 + 0.2.
  std::vector<TrajectoryGroup> groups = {{synthetic_turn(0.25, 0)}};
  std::vector<std::vector<double>> positive = {{1.0}};
  auto flat = clipped_surrogate_gradient(policy, policy, groups, positive,
                                         0.2, 0.0);
  CHECK(l2(flat) == 0.0);

  // With a negative advantage the min() keeps the unclipped branch, so the
  // same turn does carry gradient.
  std::vector<std::vector<double>> negative = {{-1.0}};
  auto active = clipped_surrogate_gradient(policy, policy, groups, negative,
                                           0.2, 0.0);
  CHECK(l2(active) > 0.0);

  // Ratio below 1 - epsilon mirrors: positive advantage flows...
  std::vector<TrajectoryGroup> low = {{synthetic_turn(0.8, 0)}};  // ratio 0.625
  auto low_pos = clipped_surrogate_gradient(policy, policy, low, positive,
                                            0.2, 0.0);
  CHECK(l2(low_pos) > 0.0);
  // ...and negative advantage is flat.
  auto low_neg = clipped_surrogate_gradient(policy, policy, low, negative,
                                            0.2, 0.0);
  CHECK(l2(low_neg) == 0.0);
}

TEST_CASE("the KL anchor pulls the policy toward the reference") {
  Policy reference = make_policy(kFeatureDim);
  Policy start = random_policy(derive_seed(206, 0), 0.4);
  auto groups = collect_craft_batch(start, 3, 4, 33);

  auto mean_kl_to_ref = [&](const Policy& policy) {
    double sum = 0.0;
    size_t turns = 0;
    for (const auto& group : groups)
      for (const auto& trajectory : group)
        for (const auto& turn : trajectory.turns) {
          auto p = softmax_probabilities(policy.theta, policy.temperature,
                                         turn.candidate_features);
          auto q = softmax_probabilities(reference.theta,
                                         reference.temperature,
                                         turn.candidate_features);
          for (size_t a = 0; a < p.size(); ++a)
            if (p[a] > 0.0) sum += p[a] * (std::log(p[a]) - std::log(q[a]));
          ++turns;
        }
    return sum / static_cast<double>(turns);
  };

  UpdateConfig config;
  config.algorithm = Algorithm::kGrpo;
  // Small enough that the first-order effect of the anchor dominates; a
  // large step can overshoot the reference and land at higher divergence.
  config.learning_rate = 1e-3;
  config.group_size = 4;

  auto run_with_beta = [&](double beta) {
    Policy policy = start;
    UpdateConfig c = config;
    c.kl_coefficient = beta;
    auto data = groups;  // updates fill caches in place; keep the source
    run_update(policy, reference, data, c);
    return mean_kl_to_ref(policy);
  };

  double drift_free = run_with_beta(0.0);
  double drift_anchored = run_with_beta(10.0);
  CHECK(drift_anchored <= drift_free + 1e-15);
}

TEST_CASE("one policy-gradient step increases the surrogate objective") {
  Policy policy = make_policy(kFeatureDim);
  auto groups = collect_bandit_batch(policy, 4, 8, 555);
  double total_reward = 0.0;
  for (const auto& group : groups)
    for (const auto& trajectory : group)
      total_reward += trajectory.outcome_reward;
  REQUIRE(total_reward > 0.0);  // 32 coin flips; failure chance 2^-32

  auto objective = [&](const Policy& p) {
    // (1/N) sum_traj r(tau) sum_t log pi(a_t | s_t)
    double sum = 0.0;
    size_t n = 0;
    for (const auto& group : groups)
      for (const auto& trajectory : group) {
        ++n;
        if (trajectory.outcome_reward == 0.0) continue;
        for (const auto& turn : trajectory.turns) {
          auto probs = softmax_probabilities(p.theta, p.temperature,
                                             turn.candidate_features);
          sum += trajectory.outcome_reward *
                 std::log(probs[turn.chosen_index]);
        }
      }
    return sum / static_cast<double>(n);
  };

  double before = objective(policy);
  UpdateConfig config;
  config.algorithm = Algorithm::kPg;
  config.learning_rate = 1e-3;
  auto data = groups;
  UpdateStats stats = run_update(policy, policy, data, config);
  double after = objective(policy);
  CHECK(after > before);
  CHECK(stats.mean_reward == doctest::Approx(total_reward / 32.0));
  CHECK(stats.grad_norm > 0.0);
  CHECK(stats.turn_count == 32);
}

TEST_CASE("every algorithm produces a finite in-place update") {
  Policy start = random_policy(derive_seed(207, 0), 0.1);
  Policy reference = start;
  for (Algorithm algorithm :
       {Algorithm::kPg, Algorithm::kGrpo, Algorithm::kRloo,
        Algorithm::kReinforcePp, Algorithm::kPpo}) {
    CAPTURE(to_string(algorithm));
    Policy policy = start;
    auto groups = collect_bandit_batch(policy, 3, 4, 808);
    UpdateConfig config;
    config.algorithm = algorithm;
    config.group_size = 4;
    UpdateStats stats = run_update(policy, reference, groups, config);
    CHECK(std::isfinite(stats.adv_mean));
    CHECK(std::isfinite(stats.adv_std));
    CHECK(std::isfinite(stats.mean_kl));
    CHECK(stats.mean_entropy > 0.0);
    CHECK(stats.trajectory_count == 12);
    for (double w : policy.theta) {
      CHECK(std::isfinite(w));
      if (!std::isfinite(w)) break;
    }
  }
}

TEST_CASE("group-based advantage estimators reject undersized groups") {
  Policy policy = make_policy(kFeatureDim);
  auto groups = collect_bandit_batch(policy, 1, 4, 909);
  groups[0].resize(1);  // a one-sample group
  UpdateConfig config;
  config.algorithm = Algorithm::kGrpo;
  CHECK_THROWS_AS((void)run_update(policy, policy, groups, config), Error);
}

TEST_CASE("ppo uses its baseline: uniform rewards give near-zero advantages") {
  // All-failure batches happen; the subtracted value head then keeps the
  // advantages tiny instead of amplifying noise.
  Policy policy = random_policy(derive_seed(208, 0), 0.05);
  auto groups = collect_craft_batch(policy, 2, 4, 404);
  bool uniform = true;
  double first = groups[0][0].outcome_reward;
  for (const auto& group : groups)
    for (const auto& trajectory : group)
      uniform = uniform && trajectory.outcome_reward == first;
  if (uniform) {
    UpdateConfig config;
    config.algorithm = Algorithm::kPpo;
    config.group_size = 4;
    Policy p = policy;
    UpdateStats stats = run_update(p, policy, groups, config);
    CHECK(std::abs(stats.adv_mean) < 0.2);
  }
}

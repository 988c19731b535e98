#include "agentrl/rollout/pool.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "agentrl/common/error.hpp"
#include "agentrl/rollout/collector.hpp"

namespace agentrl {
namespace {

// Decouples action sampling from the episode seed handed to the service.
constexpr uint64_t kSelectorSeedTag = 0x5E;

}  // namespace

RolloutPool::RolloutPool(ClientFactory factory, int worker_count)
    : factory_(std::move(factory)), worker_count_(worker_count) {
  if (!factory_)
    throw Error(ErrorCode::kValidation, "rollout pool needs a client factory");
  if (worker_count_ < 1)
    throw Error(ErrorCode::kValidation, "worker count must be positive");
}

std::vector<Trajectory> RolloutPool::run(const Policy& policy,
                                         std::span<const RolloutItem> items) {
  std::vector<Trajectory> results(items.size());
  if (items.empty()) return results;

  auto run_item = [&](EnvClient& client, size_t i) {
    const RolloutItem& item = items[i];
    if (item.greedy) {
      GreedySelector selector(policy);
      results[i] = collect_trajectory(client, item.task, item.seed,
                                      item.horizon, selector);
    } else {
      SoftmaxSelector selector(policy,
                               derive_seed(item.seed, kSelectorSeedTag));
      results[i] = collect_trajectory(client, item.task, item.seed,
                                      item.horizon, selector);
    }
  };

  size_t workers = std::min<size_t>(static_cast<size_t>(worker_count_),
                                    items.size());
  if (workers == 1) {
    auto client = factory_();
    for (size_t i = 0; i < items.size(); ++i) run_item(*client, i);
    return results;
  }

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      try {
        auto client = factory_();
        for (size_t i = next.fetch_add(1); i < items.size();
             i = next.fetch_add(1)) {
          if (failed.load()) return;
          run_item(*client, i);
        }
      } catch (...) {
        failed.store(true);
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& thread : threads) thread.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

TrajectoryGroup collect_group(RolloutPool& pool, const Policy& policy,
                              const TaskSpec& task, uint64_t group_seed,
                              int group_size, int horizon) {
  if (group_size < 2)
    throw Error(ErrorCode::kValidation, "group size must be at least 2");
  std::vector<RolloutItem> items;
  items.reserve(group_size);
  for (int i = 0; i < group_size; ++i)
    items.push_back(
        {task, derive_seed(group_seed, static_cast<uint64_t>(i)), horizon});
  return pool.run(policy, items);
}

std::vector<TrajectoryGroup> collect_batch(RolloutPool& pool,
                                           const Policy& policy,
                                           std::span<const TaskSpec> tasks,
                                           uint64_t batch_seed, int group_size,
                                           int horizon) {
  if (tasks.empty())
    throw Error(ErrorCode::kValidation, "batch needs at least one task");
  if (group_size < 2)
    throw Error(ErrorCode::kValidation, "group size must be at least 2");
  std::vector<RolloutItem> items;
  items.reserve(tasks.size() * static_cast<size_t>(group_size));
  for (size_t t = 0; t < tasks.size(); ++t) {
    uint64_t group_seed = derive_seed(batch_seed, t);
    for (int i = 0; i < group_size; ++i)
      items.push_back(
          {tasks[t], derive_seed(group_seed, static_cast<uint64_t>(i)),
           horizon});
  }
  auto flat = pool.run(policy, items);
  std::vector<TrajectoryGroup> groups(tasks.size());
  size_t cursor = 0;
  for (size_t t = 0; t < tasks.size(); ++t) {
    groups[t].reserve(group_size);
    for (int i = 0; i < group_size; ++i)
      groups[t].push_back(std::move(flat[cursor++]));
  }
  return groups;
}

}  // namespace agentrl

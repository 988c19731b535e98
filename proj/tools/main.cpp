// agentrl: serve environments, generate task suites, train policies, and
// evaluate or replay the results. Every subcommand is deterministic given
// its flags; reports land on stdout unless --out names a file.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/task.hpp"
#include "agentrl/policy/policy.hpp"
#include "agentrl/protocol/client.hpp"
#include "agentrl/protocol/codec.hpp"
#include "agentrl/protocol/http_server.hpp"
#include "agentrl/protocol/service.hpp"
#include "agentrl/train/config.hpp"
#include "agentrl/train/eval.hpp"
#include "agentrl/train/trainer.hpp"

namespace {

using namespace agentrl;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file.good())
    throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file.good())
    throw Error(ErrorCode::kInternal, "cannot write " + out_path);
  file << text << "\n";
}

// Shared flags for the subcommands that run episodes against a task suite.
struct EvalOptions {
  std::string checkpoint;
  std::string env = "craft";
  std::vector<int> difficulties;
  int tasks = 32;
  int horizon = 0;  // 0 = the env's hard turn cap
  uint64_t seed = 1;
  int workers = 4;
  std::string server;  // host:port; empty = in-process environments
  std::string out;
};

void add_eval_options(CLI::App& cmd, EvalOptions& options) {
  cmd.add_option("--checkpoint", options.checkpoint,
                 "policy checkpoint to evaluate (omit for an untrained one)");
  cmd.add_option("--env", options.env, "environment: craft|grid|hopqa|bandit")
      ->capture_default_str();
  cmd.add_option("--difficulty", options.difficulties,
                 "difficulty mix (repeatable; default: all levels)");
  cmd.add_option("--tasks", options.tasks, "suite size")
      ->capture_default_str();
  cmd.add_option("--horizon", options.horizon,
                 "turn budget per episode (default: env hard cap)");
  cmd.add_option("--seed", options.seed, "suite seed")->capture_default_str();
  cmd.add_option("--workers", options.workers, "rollout threads")
      ->capture_default_str();
  cmd.add_option("--server", options.server,
                 "evaluate against a running env server (host:port)");
  cmd.add_option("--out", options.out, "write the JSON report here");
}

ClientFactory make_factory(const std::string& server) {
  if (server.empty()) return in_process_factory(std::make_shared<EnvService>());
  auto colon = server.rfind(':');
  if (colon == std::string::npos || colon + 1 == server.size())
    throw Error(ErrorCode::kValidation, "--server expects host:port");
  return http_factory(server.substr(0, colon),
                      std::stoi(server.substr(colon + 1)));
}

Policy load_or_fresh(const std::string& checkpoint, double temperature) {
  if (checkpoint.empty()) return make_policy(kFeatureDim, temperature);
  return load_policy(checkpoint);
}

struct EvalSetup {
  std::vector<TaskSpec> tasks;
  Policy policy;
  RolloutPool pool;
  int horizon;
};

EvalSetup prepare_eval(const EvalOptions& options, double temperature = 1.0) {
  EnvKind kind = env_kind_from_string(options.env);
  std::vector<int> difficulties = options.difficulties;
  if (difficulties.empty())
    for (int d = min_difficulty(kind); d <= max_difficulty(kind); ++d)
      difficulties.push_back(d);
  auto tasks = build_task_suite(kind, difficulties, options.tasks,
                                eval_suite_seed(options.seed));
  int horizon = options.horizon > 0 ? options.horizon : hard_turn_cap(kind);
  return EvalSetup{std::move(tasks),
                   load_or_fresh(options.checkpoint, temperature),
                   RolloutPool(make_factory(options.server), options.workers),
                   horizon};
}

int cmd_serve_env(const std::string& host, int port, int session_cap) {
  ServiceConfig config;
  config.session_cap = static_cast<size_t>(session_cap);
  EnvService service(config);
  EnvHttpServer server(service);
  std::fprintf(stderr, "agentrl: serving environments on %s:%d\n",
               host.c_str(), port);
  if (!server.run(host, port)) {
    std::fprintf(stderr, "agentrl: failed to bind %s:%d\n", host.c_str(),
                 port);
    return 1;
  }
  return 0;
}

int cmd_gen_tasks(const std::string& env, std::vector<int> difficulties,
                  int count, uint64_t seed, const std::string& out) {
  EnvKind kind = env_kind_from_string(env);
  if (difficulties.empty())
    for (int d = min_difficulty(kind); d <= max_difficulty(kind); ++d)
      difficulties.push_back(d);
  auto tasks = build_task_suite(kind, difficulties, count, seed);
  std::ostringstream lines;
  for (const auto& task : tasks) lines << task_to_json(task) << "\n";
  if (out.empty()) {
    std::cout << lines.str();
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file.good()) throw Error(ErrorCode::kInternal, "cannot write " + out);
    file << lines.str();
  }
  return 0;
}

int cmd_train(const std::string& config_path, std::optional<uint64_t> seed,
              std::optional<int> workers, const std::string& out,
              const std::string& server) {
  RunConfig config =
      config_path.empty() ? RunConfig{} : run_config_from_json(read_file(config_path));
  if (seed) config.run_seed = *seed;
  if (workers) config.workers = *workers;
  if (!out.empty()) config.out_dir = out;
  ClientFactory factory;
  if (!server.empty()) factory = make_factory(server);
  TrainResult result = train(config, std::move(factory));
  std::fprintf(stderr,
               "agentrl: trained %d updates, %llu env steps, final mean "
               "reward %.4f\n",
               config.total_updates,
               static_cast<unsigned long long>(result.env_steps),
               result.reward_curve.empty() ? 0.0
                                           : result.reward_curve.back());
  std::cout << result.final_checkpoint.string() << "\n";
  return 0;
}

int cmd_eval(const EvalOptions& options) {
  EvalSetup setup = prepare_eval(options);
  EvalResult result =
      evaluate_greedy(setup.policy, setup.tasks, setup.pool, setup.horizon);
  emit(eval_report_json(result), options.out);
  return 0;
}

int cmd_pass_at_k(const EvalOptions& options, int samples,
                  double temperature) {
  EvalSetup setup = prepare_eval(options, temperature);
  PassAtKReport report =
      pass_at_k_eval(setup.policy, setup.tasks, setup.pool, setup.horizon,
                     samples, derive_seed(options.seed, 4));
  emit(pass_at_k_report_json(report), options.out);
  return 0;
}

int cmd_turn_scaling(const EvalOptions& options) {
  EvalSetup setup = prepare_eval(options);
  TurnScalingReport report =
      turn_scaling_eval(setup.policy, setup.tasks, setup.pool, setup.horizon);
  emit(turn_scaling_report_json(report), options.out);
  return 0;
}

int cmd_replay(const std::string& log, size_t index) {
  std::cout << export_transcript(log, index);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale multi-turn agent RL"};
  app.require_subcommand(1);

  // serve-env
  std::string host = "127.0.0.1";
  int port = 8712;
  int session_cap = 256;
  auto* serve = app.add_subcommand("serve-env", "run the environment server");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "bind port")->capture_default_str();
  serve->add_option("--session-cap", session_cap, "max live sessions")
      ->capture_default_str();

  // gen-tasks
  std::string gen_env = "craft";
  std::vector<int> gen_difficulties;
  int gen_count = 32;
  uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-tasks",
                                 "emit a task suite, one JSON per line");
  gen->add_option("--env", gen_env, "environment: craft|grid|hopqa|bandit")
      ->capture_default_str();
  gen->add_option("--difficulty", gen_difficulties,
                  "difficulty mix (repeatable; default: all levels)");
  gen->add_option("--count", gen_count, "number of tasks")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "suite seed")->capture_default_str();
  gen->add_option("--out", gen_out, "write here instead of stdout");

  // train
  std::string train_config;
  std::optional<uint64_t> train_seed;
  std::optional<int> train_workers;
  std::string train_out;
  std::string train_server;
  auto* tr = app.add_subcommand("train", "run a training loop");
  tr->add_option("--config", train_config, "run config JSON file");
  tr->add_option("--seed", train_seed, "override run_seed");
  tr->add_option("--workers", train_workers, "override worker count");
  tr->add_option("--out", train_out, "override the output directory");
  tr->add_option("--server", train_server,
                 "collect against a running env server (host:port)");

  // eval / pass-at-k / turn-scaling
  EvalOptions eval_options;
  auto* ev = app.add_subcommand("eval", "greedy success rate over a suite");
  add_eval_options(*ev, eval_options);

  EvalOptions pass_options;
  int pass_samples = 8;
  double pass_temperature = 1.0;
  auto* pk = app.add_subcommand("pass-at-k",
                                "sampled pass rates at growing budgets");
  add_eval_options(*pk, pass_options);
  pk->add_option("--samples", pass_samples, "episodes drawn per task")
      ->capture_default_str();
  pk->add_option("--temperature", pass_temperature, "sampling temperature")
      ->capture_default_str();

  EvalOptions scaling_options;
  auto* ts = app.add_subcommand("turn-scaling",
                                "greedy success as the turn budget grows");
  add_eval_options(*ts, scaling_options);

  // replay
  std::string replay_log;
  size_t replay_index = 0;
  auto* rp = app.add_subcommand("replay", "print one logged trajectory");
  rp->add_option("--log", replay_log, "trajectories.jsonl path")->required();
  rp->add_option("--index", replay_index, "trajectory index")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) return cmd_serve_env(host, port, session_cap);
    if (gen->parsed())
      return cmd_gen_tasks(gen_env, gen_difficulties, gen_count, gen_seed,
                           gen_out);
    if (tr->parsed())
      return cmd_train(train_config, train_seed, train_workers, train_out,
                       train_server);
    if (ev->parsed()) return cmd_eval(eval_options);
    if (pk->parsed())
      return cmd_pass_at_k(pass_options, pass_samples, pass_temperature);
    if (ts->parsed()) return cmd_turn_scaling(scaling_options);
    if (rp->parsed()) return cmd_replay(replay_log, replay_index);
  } catch (const Error& error) {
    std::fprintf(stderr, "agentrl: [%s] %s\n", to_string(error.code()),
                 error.what());
    return 1;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "agentrl: %s\n", error.what());
    return 1;
  }
  return 0;
}

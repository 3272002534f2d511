#include "multibandit/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "multibandit/errors.hpp"

namespace multibandit {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<EnvCasino> environment_for_repetition(const ExperimentConfig& config,
                                                  int rep) {
  EnvConfig env_config;
  env_config.n_casinos = config.n_casinos;
  env_config.pool_size = config.pool_size;
  env_config.arm_sigma = config.arm_sigma;
  env_config.seed = config.seed;
  // Stream 0 is reserved for environment construction so every policy at
  // this repetition sees the same truth.
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(rep), 0));
  return build_environment(env_config, rng);
}

namespace {

double score_snapshot(const WorldState& world, const std::vector<EnvCasino>& env,
                      const std::vector<CasinoTruth>& truth) {
  const Proposal snapshot = resolve_fresh(propose_best_arms(world), env);
  return regret(snapshot, truth).regret;
}

}  // namespace

EpisodeResult run_episode(PolicyKind policy, std::vector<EnvCasino>& env,
                          int budget, Rng& rng,
                          const std::vector<int>& checkpoints, double ucb_c) {
  WorldState world = WorldState::empty(static_cast<int>(env.size()));
  PolicyState pstate;
  pstate.ucb_c = ucb_c;

  const std::vector<CasinoTruth> truth = truth_of(env);

  EpisodeResult result;
  result.trace.reserve(static_cast<std::size_t>(budget));
  std::size_t next_checkpoint = 0;

  for (int step = 0; step < budget; ++step) {
    auto [action, next_pstate] = select_action(policy, pstate, world, rng);
    pstate = next_pstate;

    EnvCasino& casino = env[static_cast<std::size_t>(action.casino_id)];
    int arm_id;
    if (action.is_new()) {
      arm_id = reveal_new_arm(casino);
    } else {
      arm_id = action.arm_id;
    }
    const bool success = draw_outcome(casino, arm_id, rng);

    const Observation obs{action.casino_id, arm_id, success};
    world = apply_observation(world, obs);
    result.trace.push_back(TraceEntry{action, obs});

    while (next_checkpoint < checkpoints.size() &&
           checkpoints[next_checkpoint] == step + 1) {
      result.checkpoint_regrets.push_back(score_snapshot(world, env, truth));
      ++next_checkpoint;
    }
  }
  // Checkpoints at 0 (or beyond a zero budget) still get a snapshot.
  while (next_checkpoint < checkpoints.size() &&
         checkpoints[next_checkpoint] <= budget) {
    result.checkpoint_regrets.push_back(score_snapshot(world, env, truth));
    ++next_checkpoint;
  }

  result.proposal = resolve_fresh(propose_best_arms(world), env);
  const RegretResult scored = regret(result.proposal, truth);
  result.regret = scored.regret;
  result.reward = scored.reward;
  return result;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.budget < 1) {
    throw DomainError("budget must be >= 1");
  }
  if (config.repetitions < 1) {
    throw DomainError("repetitions must be >= 1");
  }
  if (config.policies.empty()) {
    throw DomainError("at least one policy is required");
  }
  for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
    if (config.checkpoints[i] < 0 || config.checkpoints[i] > config.budget ||
        (i > 0 && config.checkpoints[i] <= config.checkpoints[i - 1])) {
      throw DomainError("checkpoints must be ascending and within the budget");
    }
  }

  const auto start = std::chrono::steady_clock::now();

  const std::size_t n_policies = config.policies.size();
  const std::size_t reps = static_cast<std::size_t>(config.repetitions);
  const std::size_t n_items = n_policies * reps;

  struct Cell {
    double regret = 0.0;
    double reward = 0.0;
    std::vector<double> checkpoint_regrets;
  };
  std::vector<Cell> cells(n_items);

  std::atomic<std::size_t> next_item{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t item = next_item.fetch_add(1);
      if (item >= n_items) return;
      const std::size_t pi = item / reps;
      const int rep = static_cast<int>(item % reps);
      const PolicyKind policy = config.policies[pi];

      std::vector<EnvCasino> env = environment_for_repetition(config, rep);
      // Episode substreams are keyed by the policy's identity, not its
      // position in the list, so a subset run reproduces the same numbers.
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(rep),
                          1 + static_cast<std::uint64_t>(policy)));
      EpisodeResult episode = run_episode(policy, env, config.budget, rng,
                                          config.checkpoints, config.ucb_c);
      cells[item] = Cell{episode.regret, episode.reward,
                         std::move(episode.checkpoint_regrets)};
    }
  };

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_items));

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentReport report;
  report.config = config;
  report.policies.reserve(n_policies);
  for (std::size_t pi = 0; pi < n_policies; ++pi) {
    PolicyReport pr;
    pr.policy = config.policies[pi];
    pr.regrets.reserve(reps);
    pr.rewards.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const Cell& cell = cells[pi * reps + r];
      pr.regrets.push_back(cell.regret);
      pr.rewards.push_back(cell.reward);
    }
    pr.mean_regret = mean_of(pr.regrets);
    pr.std_regret = sample_stddev(pr.regrets);
    pr.mean_reward = mean_of(pr.rewards);
    pr.checkpoint_mean_regret.assign(config.checkpoints.size(), 0.0);
    for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        sum += cells[pi * reps + r].checkpoint_regrets[c];
      }
      pr.checkpoint_mean_regret[c] = sum / static_cast<double>(reps);
    }
    report.policies.push_back(std::move(pr));
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace multibandit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multibandit/core.hpp"
#include "multibandit/policies.hpp"
#include "multibandit/sim_env.hpp"

// Runs policy-vs-environment episodes and aggregates regret over seeded
// repetitions. At repetition r every policy faces the identical
// environment (paired comparison); episode randomness gets its own
// substream per (repetition, policy).

namespace multibandit {

struct ExperimentConfig {
  std::vector<PolicyKind> policies = {PolicyKind::Rand, PolicyKind::Tile,
                                      PolicyKind::TileInf, PolicyKind::CasInf};
  int n_casinos = 100;
  int budget = 600;
  int repetitions = 100;
  std::uint64_t seed = 7;
  int pool_size = 1000;
  double arm_sigma = 0.2;
  std::vector<int> checkpoints;  // ascending intermediate budgets
  double ucb_c = 2.0;
  int threads = 0;  // 0 = hardware concurrency

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

struct TraceEntry {
  ActionKind action;
  Observation observation;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct EpisodeResult {
  Proposal proposal;  // Fresh entries already resolved
  double regret = 0.0;
  double reward = 0.0;
  std::vector<TraceEntry> trace;            // one entry per budget step
  std::vector<double> checkpoint_regrets;   // aligned with `checkpoints`
};

struct PolicyReport {
  PolicyKind policy = PolicyKind::Rand;
  std::vector<double> regrets;  // one per repetition
  std::vector<double> rewards;
  double mean_regret = 0.0;
  double std_regret = 0.0;  // sample (n-1) estimator
  double mean_reward = 0.0;
  std::vector<double> checkpoint_mean_regret;

  friend bool operator==(const PolicyReport&, const PolicyReport&) = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<PolicyReport> policies;
  double wall_clock_seconds = 0.0;

  friend bool operator==(const ExperimentReport&,
                         const ExperimentReport&) = default;
};

double mean_of(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

// The environment every policy faces at repetition `rep`.
std::vector<EnvCasino> environment_for_repetition(const ExperimentConfig& config,
                                                  int rep);

// Plays exactly `budget` select/draw/apply steps, then proposes and
// scores. At each checkpoint the would-be proposal is scored without
// consuming budget. Propagates PoolExhausted when the pool is too small.
EpisodeResult run_episode(PolicyKind policy, std::vector<EnvCasino>& env,
                          int budget, Rng& rng,
                          const std::vector<int>& checkpoints = {},
                          double ucb_c = 2.0);

// Full experiment: repetitions run in parallel, aggregation is a
// deterministic merge, so the report depends only on the config.
ExperimentReport run_experiment(const ExperimentConfig& config);

// --- report output -------------------------------------------------------

enum class ReportFormat { Csv, Json, Svg };

// CSV rows are `policy,repetition,regret,reward`; JSON mirrors
// ExperimentReport; SVG is a mean +/- stddev whisker chart. Throws
// IoError when the path cannot be written.
void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::string& path);

std::string report_csv(const ExperimentReport& report);
std::string report_json_text(const ExperimentReport& report);
ExperimentReport report_from_json_text(const std::string& text);
std::string report_svg(const ExperimentReport& report);

struct WhiskerDatum {
  std::string label;
  double mean = 0.0;
  double stddev = 0.0;
};

std::string render_whisker_svg(const std::vector<WhiskerDatum>& data,
                               const std::string& title);

// Re-aggregates a results CSV (as written by write_report) into per-policy
// whisker data, preserving first-appearance order of policies.
std::vector<WhiskerDatum> summarize_results_csv(const std::string& path);

}  // namespace multibandit

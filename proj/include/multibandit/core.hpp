#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Value types and pure functions for the multi-bandit observation state.
// No randomness, no I/O; transitions return new states.

namespace multibandit {

// Success/failure counts for one arm. An arm exists only after its first
// observation, so successes + failures >= 1 for every stored arm.
struct ArmRecord {
  int arm_id = 0;  // ordinal within its casino
  std::int64_t successes = 0;
  std::int64_t failures = 0;

  std::int64_t pulls() const { return successes + failures; }

  friend bool operator==(const ArmRecord&, const ArmRecord&) = default;
};

// One bandit: its sampled arms plus the running observation count M.
struct CasinoState {
  int casino_id = 0;
  std::vector<ArmRecord> arms;          // arm_id == index
  std::int64_t total_observations = 0;  // M == sum of pulls over arms

  int num_arms() const { return static_cast<int>(arms.size()); }

  friend bool operator==(const CasinoState&, const CasinoState&) = default;
};

struct WorldState {
  std::vector<CasinoState> casinos;

  int num_casinos() const { return static_cast<int>(casinos.size()); }

  friend bool operator==(const WorldState&, const WorldState&) = default;

  // An empty world with n casinos, no arms sampled anywhere.
  static WorldState empty(int n_casinos);
};

// Arm selection: either try a never-observed arm of a casino, or pull an
// existing arm again.
struct ActionKind {
  enum class Kind { SampleNew, SampleExisting };

  Kind kind = Kind::SampleNew;
  int casino_id = 0;
  int arm_id = -1;  // meaningful only for SampleExisting

  static ActionKind sample_new(int casino_id) {
    return {Kind::SampleNew, casino_id, -1};
  }
  static ActionKind sample_existing(int casino_id, int arm_id) {
    return {Kind::SampleExisting, casino_id, arm_id};
  }
  bool is_new() const { return kind == Kind::SampleNew; }

  friend bool operator==(const ActionKind&, const ActionKind&) = default;
};

// Best-arm proposal: one entry per casino; nullopt means Fresh, i.e.
// propose an arm that was never observed.
struct Proposal {
  std::vector<std::optional<int>> arm_ids;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

// A single Bernoulli outcome on one arm. arm_id == K (the casino's
// current arm count) creates a new arm holding this first observation.
struct Observation {
  int casino_id = 0;
  int arm_id = 0;
  bool success = false;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Ground truth for one casino, used only to score proposals.
struct CasinoTruth {
  std::vector<double> arm_probs;  // true Bernoulli parameter per arm_id
  double p_star = 0.0;            // best arm's parameter
};

struct RegretResult {
  double regret = 0.0;  // sum over casinos of p_star - p(proposed)
  double reward = 0.0;  // sum over casinos of p(proposed)
};

// Returns a copy of `state` with the observation folded in: exactly one
// counter of one arm incremented, that casino's M incremented, everything
// else untouched. Throws IndexError for an out-of-range casino or an
// arm_id beyond K.
WorldState apply_observation(const WorldState& state, const Observation& obs);

// A / (A + B). Throws ContractViolation when the arm has no observations.
double empirical_mean(const ArmRecord& arm);

// (A + 1) / (A + B + 2): mean of the Beta(A+1, B+1) posterior under a
// Beta(1, 1) prior. Defined for all counts, including (0, 0).
double posterior_mean(const ArmRecord& arm);

// Variance of Beta(alpha, beta). Throws DomainError unless both are > 0.
double beta_variance(double alpha, double beta);

// Per casino, the arm maximizing posterior_mean; ties go to the lowest
// arm_id; a casino with no arms yields Fresh.
Proposal propose_best_arms(const WorldState& state);

// Scores a proposal against ground truth. Every entry must be a concrete
// arm covered by `truth` (callers resolve Fresh first); otherwise throws
// DataError.
RegretResult regret(const Proposal& proposal,
                    const std::vector<CasinoTruth>& truth);

}  // namespace multibandit

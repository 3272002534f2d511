#pragma once

#include <optional>
#include <string>
#include <utility>

#include "multibandit/core.hpp"
#include "multibandit/rng.hpp"

// The four agents compared in the simulation harness. All are pure
// functions of (world, policy state, rng); only Rand consumes randomness
// (exactly two engine outputs per call).

namespace multibandit {

enum class PolicyKind { Rand, Tile, TileInf, CasInf };

// Canonical names used in configs, CSV output and the CLI.
std::string policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy(const std::string& name);

struct PolicyState {
  int cursor = 0;       // round-robin position, used by Tile and TileInf
  double ucb_c = 2.0;   // UCB exploration constant

  friend bool operator==(const PolicyState&, const PolicyState&) = default;
};

// Task difficulty in [0, 1]; 1 means near-optimal arms are rare.
struct Difficulty {
  double beta = 1.0;
};

// 1 minus the best sampled mean; a casino with no arms is maximally
// difficult (beta = 1), which forces exploration.
Difficulty estimate_beta(const CasinoState& casino);

// True when the current arm count K is at most M^beta (boundary
// inclusive). M = 0 is treated as M^beta = 1, so an empty casino always
// samples a new arm.
bool should_sample_new(std::int64_t num_arms, std::int64_t num_observations,
                       Difficulty difficulty);

// UCB1 over existing arms: argmax of empirical mean + sqrt(c ln M / n_j),
// ties to the lowest arm_id. Throws ContractViolation when K = 0; route
// through should_sample_new first.
int ucb_select(const CasinoState& casino, double c);

// Uncertainty about a casino's best arm: rank arms by empirical mean
// (descending, ties to lower arm_id), pool the counts of the top
// ceil(K/2) arms into one Beta(1 + sum A, 1 + sum B), return its
// variance. K = 0 yields +infinity so unexplored casinos rank first.
double casino_uncertainty(const CasinoState& casino);

// One decision step. Returns the chosen action and the successor policy
// state (advanced cursor for the round-robin agents).
std::pair<ActionKind, PolicyState> select_action(PolicyKind kind,
                                                 const PolicyState& pstate,
                                                 const WorldState& world,
                                                 Rng& rng);

}  // namespace multibandit

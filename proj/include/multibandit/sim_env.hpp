#pragma once

#include <cstdint>
#include <vector>

#include "multibandit/core.hpp"
#include "multibandit/rng.hpp"

// Seeded ground-truth environment. The infinite arm supply of each casino
// is approximated by a pre-sampled pool of true Bernoulli parameters;
// arms are revealed in pool order, which is already random.

namespace multibandit {

struct EnvConfig {
  int n_casinos = 100;
  int pool_size = 1000;    // arms pre-sampled per casino
  double arm_sigma = 0.2;  // spread of arm quality around the casino's
  std::uint64_t seed = 7;

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

struct EnvCasino {
  double quality = 0.0;           // casino mean quality d, drawn U(0,1)
  std::vector<double> pool;       // true parameter per arm, pool order
  double p_star = 0.0;            // max over the pool
  int next_unrevealed = 0;        // cursor into the pool
};

// One draw from Gaussian(mu, sigma) conditioned on [lo, hi]. Rejection
// sampling capped at 64 tries; after the cap the next draw is clamped
// into the interval instead. Throws DomainError when sigma <= 0.
double trunc_gauss_sample(double mu, double sigma, double lo, double hi,
                          Rng& rng);

// Draws every casino's quality from U(0,1) and its pool from the
// truncated Gaussian around that quality. Fully determined by the state
// of `rng`; config.seed is applied by callers (see harness).
std::vector<EnvCasino> build_environment(const EnvConfig& config, Rng& rng);

// Returns the next unrevealed pool index and advances the cursor.
// Throws PoolExhausted once all pool_size arms have been revealed.
int reveal_new_arm(EnvCasino& casino);

// Bernoulli outcome of one pull on a revealed arm. Throws
// ContractViolation if the arm was never revealed.
bool draw_outcome(const EnvCasino& casino, int arm, Rng& rng);

// Ground truth view used to score proposals against this environment.
std::vector<CasinoTruth> truth_of(const std::vector<EnvCasino>& env);

// Replaces Fresh entries with the casino's cursor arm — the arm that
// would have been revealed next — so the proposal is concrete.
Proposal resolve_fresh(const Proposal& proposal,
                       const std::vector<EnvCasino>& env);

}  // namespace multibandit

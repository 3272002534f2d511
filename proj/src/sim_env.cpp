#include "multibandit/sim_env.hpp"

#include <algorithm>
#include <string>

#include "multibandit/errors.hpp"

namespace multibandit {

double trunc_gauss_sample(double mu, double sigma, double lo, double hi,
                          Rng& rng) {
  if (!(sigma > 0.0)) {
    throw DomainError("trunc_gauss_sample requires sigma > 0");
  }
  if (!(lo < hi)) {
    throw DomainError("trunc_gauss_sample requires lo < hi");
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double draw = gaussian_draw(rng, mu, sigma);
    if (draw >= lo && draw <= hi) {
      return draw;
    }
  }
  // The interval is essentially unreachable from (mu, sigma); fall back
  // to clamping so the support contract still holds.
  return std::clamp(gaussian_draw(rng, mu, sigma), lo, hi);
}

std::vector<EnvCasino> build_environment(const EnvConfig& config, Rng& rng) {
  if (config.n_casinos < 1) {
    throw DomainError("n_casinos must be >= 1");
  }
  if (config.pool_size < 1) {
    throw DomainError("pool_size must be >= 1");
  }
  if (!(config.arm_sigma > 0.0)) {
    throw DomainError("arm_sigma must be > 0");
  }
  std::vector<EnvCasino> env(static_cast<std::size_t>(config.n_casinos));
  for (EnvCasino& casino : env) {
    casino.quality = uniform_unit(rng);
    casino.pool.resize(static_cast<std::size_t>(config.pool_size));
    for (double& p : casino.pool) {
      p = trunc_gauss_sample(casino.quality, config.arm_sigma, 0.0, 1.0, rng);
    }
    casino.p_star = *std::max_element(casino.pool.begin(), casino.pool.end());
    casino.next_unrevealed = 0;
  }
  return env;
}

int reveal_new_arm(EnvCasino& casino) {
  if (casino.next_unrevealed >= static_cast<int>(casino.pool.size())) {
    throw PoolExhausted("all " + std::to_string(casino.pool.size()) +
                        " pooled arms revealed; increase pool_size");
  }
  return casino.next_unrevealed++;
}

bool draw_outcome(const EnvCasino& casino, int arm, Rng& rng) {
  if (arm < 0 || arm >= casino.next_unrevealed) {
    throw ContractViolation("draw_outcome on unrevealed arm " +
                            std::to_string(arm));
  }
  return bernoulli_draw(rng, casino.pool[static_cast<std::size_t>(arm)]);
}

std::vector<CasinoTruth> truth_of(const std::vector<EnvCasino>& env) {
  std::vector<CasinoTruth> truth;
  truth.reserve(env.size());
  for (const EnvCasino& casino : env) {
    truth.push_back(CasinoTruth{casino.pool, casino.p_star});
  }
  return truth;
}

Proposal resolve_fresh(const Proposal& proposal,
                       const std::vector<EnvCasino>& env) {
  Proposal resolved = proposal;
  for (std::size_t i = 0; i < resolved.arm_ids.size(); ++i) {
    if (!resolved.arm_ids[i].has_value()) {
      // Never-sampled casino: charge the arm that reveal_new_arm would
      // have produced. The cursor is 0 for such casinos, and pools are
      // never empty, so the index is always valid.
      resolved.arm_ids[i] = env[i].next_unrevealed;
    }
  }
  return resolved;
}

}  // namespace multibandit

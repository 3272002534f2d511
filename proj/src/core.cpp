#include "multibandit/core.hpp"

#include <string>

#include "multibandit/errors.hpp"

namespace multibandit {

WorldState WorldState::empty(int n_casinos) {
  WorldState world;
  world.casinos.resize(static_cast<std::size_t>(n_casinos));
  for (int i = 0; i < n_casinos; ++i) {
    world.casinos[static_cast<std::size_t>(i)].casino_id = i;
  }
  return world;
}

WorldState apply_observation(const WorldState& state, const Observation& obs) {
  if (obs.casino_id < 0 || obs.casino_id >= state.num_casinos()) {
    throw IndexError("casino " + std::to_string(obs.casino_id) +
                     " out of range (N=" + std::to_string(state.num_casinos()) +
                     ")");
  }
  WorldState next = state;
  CasinoState& casino = next.casinos[static_cast<std::size_t>(obs.casino_id)];
  const int k = casino.num_arms();
  if (obs.arm_id < 0 || obs.arm_id > k) {
    throw IndexError("arm " + std::to_string(obs.arm_id) + " out of range (K=" +
                     std::to_string(k) + ") in casino " +
                     std::to_string(obs.casino_id));
  }
  if (obs.arm_id == k) {
    casino.arms.push_back(ArmRecord{k, 0, 0});
  }
  ArmRecord& arm = casino.arms[static_cast<std::size_t>(obs.arm_id)];
  if (obs.success) {
    ++arm.successes;
  } else {
    ++arm.failures;
  }
  ++casino.total_observations;
  return next;
}

double empirical_mean(const ArmRecord& arm) {
  const std::int64_t n = arm.pulls();
  if (n <= 0) {
    throw ContractViolation("empirical_mean of an arm with no observations");
  }
  return static_cast<double>(arm.successes) / static_cast<double>(n);
}

double posterior_mean(const ArmRecord& arm) {
  return static_cast<double>(arm.successes + 1) /
         static_cast<double>(arm.pulls() + 2);
}

double beta_variance(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("beta_variance requires alpha > 0 and beta > 0");
  }
  const double s = alpha + beta;
  return alpha * beta / (s * s * (s + 1.0));
}

Proposal propose_best_arms(const WorldState& state) {
  Proposal proposal;
  proposal.arm_ids.reserve(state.casinos.size());
  for (const CasinoState& casino : state.casinos) {
    if (casino.arms.empty()) {
      proposal.arm_ids.push_back(std::nullopt);
      continue;
    }
    int best = 0;
    double best_score = posterior_mean(casino.arms[0]);
    for (int j = 1; j < casino.num_arms(); ++j) {
      const double score = posterior_mean(casino.arms[static_cast<std::size_t>(j)]);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    proposal.arm_ids.push_back(best);
  }
  return proposal;
}

RegretResult regret(const Proposal& proposal,
                    const std::vector<CasinoTruth>& truth) {
  if (proposal.arm_ids.size() != truth.size()) {
    throw DataError("proposal covers " + std::to_string(proposal.arm_ids.size()) +
                    " casinos but truth covers " + std::to_string(truth.size()));
  }
  RegretResult result;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::optional<int>& choice = proposal.arm_ids[i];
    if (!choice.has_value()) {
      throw DataError("unresolved Fresh proposal for casino " +
                      std::to_string(i));
    }
    const std::size_t arm = static_cast<std::size_t>(*choice);
    if (*choice < 0 || arm >= truth[i].arm_probs.size()) {
      throw DataError("no truth entry for arm " + std::to_string(*choice) +
                      " of casino " + std::to_string(i));
    }
    const double p = truth[i].arm_probs[arm];
    result.regret += truth[i].p_star - p;
    result.reward += p;
  }
  return result;
}

}  // namespace multibandit

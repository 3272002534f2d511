#include "multibandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "multibandit/errors.hpp"

namespace multibandit {

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Rand:
      return "rand";
    case PolicyKind::Tile:
      return "tile";
    case PolicyKind::TileInf:
      return "tile-inf";
    case PolicyKind::CasInf:
      return "cas-inf";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(const std::string& name) {
  if (name == "rand") return PolicyKind::Rand;
  if (name == "tile") return PolicyKind::Tile;
  if (name == "tile-inf") return PolicyKind::TileInf;
  if (name == "cas-inf") return PolicyKind::CasInf;
  return std::nullopt;
}

Difficulty estimate_beta(const CasinoState& casino) {
  if (casino.arms.empty()) {
    return Difficulty{1.0};
  }
  double best = 0.0;
  for (const ArmRecord& arm : casino.arms) {
    best = std::max(best, empirical_mean(arm));
  }
  return Difficulty{1.0 - best};
}

bool should_sample_new(std::int64_t num_arms, std::int64_t num_observations,
                       Difficulty difficulty) {
  const double cap =
      num_observations == 0
          ? 1.0
          : std::pow(static_cast<double>(num_observations), difficulty.beta);
  return static_cast<double>(num_arms) <= cap;
}

int ucb_select(const CasinoState& casino, double c) {
  if (casino.arms.empty()) {
    throw ContractViolation("ucb_select on a casino with no arms");
  }
  const double log_m =
      std::log(static_cast<double>(casino.total_observations));
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < casino.num_arms(); ++j) {
    const ArmRecord& arm = casino.arms[static_cast<std::size_t>(j)];
    const double bonus =
        std::sqrt(c * log_m / static_cast<double>(arm.pulls()));
    const double score = empirical_mean(arm) + bonus;
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

double casino_uncertainty(const CasinoState& casino) {
  const int k = casino.num_arms();
  if (k == 0) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = empirical_mean(casino.arms[static_cast<std::size_t>(a)]);
    const double mb = empirical_mean(casino.arms[static_cast<std::size_t>(b)]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  const int top = (k + 1) / 2;  // ceil(K/2), never empty
  std::int64_t ones = 0;
  std::int64_t zeros = 0;
  for (int r = 0; r < top; ++r) {
    const ArmRecord& arm =
        casino.arms[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    ones += arm.successes;
    zeros += arm.failures;
  }
  return beta_variance(1.0 + static_cast<double>(ones),
                       1.0 + static_cast<double>(zeros));
}

namespace {

// Wang-style arm rule shared by TileInf and CasInf: open a new arm while
// K <= M^beta, otherwise run UCB1 on the arms we have.
ActionKind infinite_arm_action(const CasinoState& casino, int casino_id,
                               double ucb_c) {
  const Difficulty difficulty = estimate_beta(casino);
  if (should_sample_new(casino.num_arms(), casino.total_observations,
                        difficulty)) {
    return ActionKind::sample_new(casino_id);
  }
  return ActionKind::sample_existing(casino_id, ucb_select(casino, ucb_c));
}

ActionKind tile_arm_action(const CasinoState& casino, int casino_id) {
  const std::int64_t k = casino.num_arms();
  if (k * k <= casino.total_observations) {
    return ActionKind::sample_new(casino_id);
  }
  int least = 0;
  std::int64_t least_pulls = casino.arms[0].pulls();
  for (int j = 1; j < casino.num_arms(); ++j) {
    const std::int64_t pulls = casino.arms[static_cast<std::size_t>(j)].pulls();
    if (pulls < least_pulls) {
      least_pulls = pulls;
      least = j;
    }
  }
  return ActionKind::sample_existing(casino_id, least);
}

}  // namespace

std::pair<ActionKind, PolicyState> select_action(PolicyKind kind,
                                                 const PolicyState& pstate,
                                                 const WorldState& world,
                                                 Rng& rng) {
  const int n = world.num_casinos();
  if (n < 1) {
    throw ContractViolation("select_action on an empty world");
  }
  PolicyState next = pstate;
  switch (kind) {
    case PolicyKind::Rand: {
      // Two engine outputs: one for the casino, one for the arm choice
      // among the K existing arms plus the new-arm option.
      const int casino_id =
          static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
      const CasinoState& casino =
          world.casinos[static_cast<std::size_t>(casino_id)];
      const std::size_t k = casino.arms.size();
      const std::size_t pick = uniform_index(rng, k + 1);
      if (pick == k) {
        return {ActionKind::sample_new(casino_id), next};
      }
      return {ActionKind::sample_existing(casino_id, static_cast<int>(pick)),
              next};
    }
    case PolicyKind::Tile: {
      const int casino_id = pstate.cursor;
      next.cursor = (pstate.cursor + 1) % n;
      return {tile_arm_action(world.casinos[static_cast<std::size_t>(casino_id)],
                              casino_id),
              next};
    }
    case PolicyKind::TileInf: {
      const int casino_id = pstate.cursor;
      next.cursor = (pstate.cursor + 1) % n;
      return {infinite_arm_action(
                  world.casinos[static_cast<std::size_t>(casino_id)], casino_id,
                  pstate.ucb_c),
              next};
    }
    case PolicyKind::CasInf: {
      int casino_id = 0;
      double best = casino_uncertainty(world.casinos[0]);
      for (int i = 1; i < n; ++i) {
        const double score =
            casino_uncertainty(world.casinos[static_cast<std::size_t>(i)]);
        if (score > best) {
          best = score;
          casino_id = i;
        }
      }
      return {infinite_arm_action(
                  world.casinos[static_cast<std::size_t>(casino_id)], casino_id,
                  pstate.ucb_c),
              next};
    }
  }
  throw ContractViolation("unknown policy kind");
}

}  // namespace multibandit

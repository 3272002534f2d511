#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

// An independent, written-out re-derivation of the cas-inf decision
// procedure, used to cross-check the library on exhaustively enumerated
// small instances. Casino choice, the mean ranking, and the new-arm rule
// are done in exact integer arithmetic so every tie is decided exactly;
// only the UCB scores use floating point.

namespace refagent {

struct Arm {
  std::int64_t ones = 0;
  std::int64_t zeros = 0;
};

struct Casino {
  std::vector<Arm> arms;
};

struct Decision {
  int casino = 0;
  bool sample_new = true;
  int arm = -1;
};

// sign of a/b - c/d for nonnegative numerators, positive denominators
inline int compare_ratio(std::int64_t a, std::int64_t b, std::int64_t c,
                         std::int64_t d) {
  const std::int64_t lhs = a * d;
  const std::int64_t rhs = c * b;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

inline std::int64_t ipow(std::int64_t base, std::int64_t exp) {
  std::int64_t out = 1;
  for (std::int64_t i = 0; i < exp; ++i) out *= base;
  return out;
}

// Uncertainty proxy about a casino's best arm, as an exact rational:
// rank arms by sampled mean, pool the counts of the top half (rounded
// up), and take the variance of Beta(1 + total ones, 1 + total zeros).
// Returns {numerator, denominator}; a casino with no arms is maximally
// uncertain, flagged by denominator 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 0;  // 0 encodes "infinite"
};

inline Rational uncertainty(const Casino& casino) {
  const int k = static_cast<int>(casino.arms.size());
  if (k == 0) return {1, 0};

  std::vector<int> ranked(casino.arms.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  std::sort(ranked.begin(), ranked.end(), [&](int lhs, int rhs) {
    const Arm& a = casino.arms[static_cast<std::size_t>(lhs)];
    const Arm& b = casino.arms[static_cast<std::size_t>(rhs)];
    const int cmp = compare_ratio(a.ones, a.ones + a.zeros, b.ones, b.ones + b.zeros);
    if (cmp != 0) return cmp > 0;
    return lhs < rhs;
  });

  std::int64_t ones = 0;
  std::int64_t zeros = 0;
  for (int r = 0; r < (k + 1) / 2; ++r) {
    const Arm& arm = casino.arms[static_cast<std::size_t>(ranked[static_cast<std::size_t>(r)])];
    ones += arm.ones;
    zeros += arm.zeros;
  }
  const std::int64_t alpha = 1 + ones;
  const std::int64_t beta = 1 + zeros;
  const std::int64_t total = alpha + beta;
  return {alpha * beta, total * total * (total + 1)};
}

inline bool less_uncertain(const Rational& a, const Rational& b) {
  if (b.den == 0) return a.den != 0;
  if (a.den == 0) return false;
  return a.num * b.den < b.num * a.den;
}

inline Decision decide(const std::vector<Casino>& world, double ucb_c) {
  // Casino with the most uncertain best arm; first one wins ties.
  int chosen = 0;
  Rational best = uncertainty(world[0]);
  for (int i = 1; i < static_cast<int>(world.size()); ++i) {
    const Rational u = uncertainty(world[static_cast<std::size_t>(i)]);
    if (less_uncertain(best, u)) {
      best = u;
      chosen = i;
    }
  }

  const Casino& casino = world[static_cast<std::size_t>(chosen)];
  const std::int64_t k = static_cast<std::int64_t>(casino.arms.size());
  std::int64_t m = 0;
  for (const Arm& arm : casino.arms) m += arm.ones + arm.zeros;

  if (k == 0 || m == 0) {
    return {chosen, true, -1};
  }

  // Best sampled mean a*/n* gives the difficulty 1 - a*/n*; the rule
  // "new arm while K <= M^beta" becomes K^n* <= M^(n* - a*) exactly.
  std::int64_t best_a = casino.arms[0].ones;
  std::int64_t best_n = casino.arms[0].ones + casino.arms[0].zeros;
  for (const Arm& arm : casino.arms) {
    const std::int64_t n = arm.ones + arm.zeros;
    if (compare_ratio(arm.ones, n, best_a, best_n) > 0) {
      best_a = arm.ones;
      best_n = n;
    }
  }
  if (ipow(k, best_n) <= ipow(m, best_n - best_a)) {
    return {chosen, true, -1};
  }

  // UCB over existing arms, first index wins ties.
  int pick = 0;
  double pick_score = -1.0;
  for (int j = 0; j < static_cast<int>(k); ++j) {
    const Arm& arm = casino.arms[static_cast<std::size_t>(j)];
    const double n = static_cast<double>(arm.ones + arm.zeros);
    const double score = static_cast<double>(arm.ones) / n +
                         std::sqrt(ucb_c * std::log(static_cast<double>(m)) / n);
    if (score > pick_score) {
      pick_score = score;
      pick = j;
    }
  }
  return {chosen, false, pick};
}

}  // namespace refagent

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Numeric-integration oracles used to cross-check closed-form moment
// computations. Nothing here touches the library implementations.

namespace oracle {

struct Quadrature {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre rule mapped from [-1, 1] to [0, 1]. Exact for
// polynomials of degree <= 2n - 1, so every integer-count Beta density
// the tests generate is integrated exactly up to roundoff.
inline Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p_prev = 1.0;
      double p = x;
      for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
      }
      derivative = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean evaluation at the converged node for the weight.
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
      const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
      p_prev = p;
      p = p_next;
    }
    derivative = n * (x * p - p_prev) / (x * x - 1.0);
    q.nodes[static_cast<std::size_t>(i)] = 0.5 * (x + 1.0);
    // Standard weight 2 / ((1 - x^2) P_n'(x)^2), halved by the interval map.
    q.weights[static_cast<std::size_t>(i)] =
        1.0 / ((1.0 - x * x) * derivative * derivative);
  }
  return q;
}

inline const Quadrature& default_rule() {
  static const Quadrature rule = gauss_legendre(256);
  return rule;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Mean and variance of Beta(alpha, beta) from its unnormalized density,
// via three quadratures: the normalizer and the first two raw moments.
inline Moments beta_moments(double alpha, double beta) {
  const Quadrature& rule = default_rule();
  double z = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double density = std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0);
    const double w = rule.weights[i];
    z += w * density;
    m1 += w * density * x;
    m2 += w * density * x * x;
  }
  const double mean = m1 / z;
  return {mean, m2 / z - mean * mean};
}

// Mean of a Gaussian(mu, sigma) conditioned on [0, 1], by quadrature of
// the restricted density.
inline double truncated_gaussian_mean(double mu, double sigma) {
  const Quadrature& rule = default_rule();
  double z = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double t = (x - mu) / sigma;
    const double density = std::exp(-0.5 * t * t);
    z += rule.weights[i] * density;
    m1 += rule.weights[i] * density * x;
  }
  return m1 / z;
}

}  // namespace oracle

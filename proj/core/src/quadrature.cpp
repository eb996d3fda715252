#include "recu/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "recu/errors.hpp"

namespace recu {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // Newton on P_n from the Chebyshev-like initial guess; roots come in +- pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = rule.weights[hi] = half * w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = mid;
  return rule;
}

QuadratureRule uniform_midpoint(int n, double a, double b) {
  if (n < 1) throw ValidationError("quadrature needs at least one node");
  QuadratureRule rule;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(a + (i + 0.5) * h);
    rule.weights.push_back(h);
  }
  return rule;
}

QuadratureRule uniform_closed(int n, double a, double b) {
  if (n < 2) throw ValidationError("a closed uniform grid needs at least two nodes");
  QuadratureRule rule;
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(i == n - 1 ? b : a + i * h);
    rule.weights.push_back(i == 0 || i == n - 1 ? 0.5 * h : h);
  }
  return rule;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace recu

#pragma once

#include <span>
#include <vector>

namespace recu {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n equal cells on [a, b], one node at each cell midpoint.
QuadratureRule uniform_midpoint(int n, double a, double b);

/// n equally spaced nodes including both endpoints, trapezoid weights.
/// Used for sup-sampling, where only the nodes matter.
QuadratureRule uniform_closed(int n, double a, double b);

/// Pairwise summation with a fixed reduction order.
double pairwise_sum(std::span<const double> values);

}  // namespace recu

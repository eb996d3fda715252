#pragma once

#include <span>
#include <variant>
#include <vector>

#include "recu/network.hpp"

namespace recu {

/// Exact two-layer ReCU networks. Each one reproduces its closed form only on
/// the stated domain; outside it the realization is a different cubic spline.
namespace gadgets {

/// Identity on prod_j [-r_j, r_j], hidden width 4d, built per coordinate from
/// x = [rho(x+r+2) + rho(-x+r) - rho(x+r) - rho(-x+r+2)] / (24(r+1)).
Network identity(std::span<const double> radius);
Network identity(Eigen::Index d, double radius);

/// x -> x^2 on [-r, r]: [rho(-x+r) + rho(x+r)] / (6r) - r^2/3. 7 weights, 4 neurons.
Network square(double radius);

/// (t, x) -> t x on [-r, r]^2, hidden width 4. 16 weights, 7 neurons.
Network product(double radius);

/// x -> x on [0, 1]: [rho(x+1) - rho(-x+1) - 2 rho(x)] / 6. 8 weights, 5 neurons.
Network monomial_extractor();

/// Two-layer network with input_dim inputs that outputs `value` everywhere.
Network constant(Eigen::Index input_dim, double value);

}  // namespace gadgets

enum class BumpVariant { paper, bspline };

struct IdentitySpec {
  std::vector<double> radius;
};
struct SquareSpec {
  double radius = 1.0;
};
struct ProductSpec {
  double radius = 1.0;
};
struct BumpSpec {
  BumpVariant variant = BumpVariant::bspline;
};
struct ExtractorSpec {};

using GadgetSpec = std::variant<IdentitySpec, SquareSpec, ProductSpec, BumpSpec, ExtractorSpec>;

Network build_gadget(const GadgetSpec& spec);

}  // namespace recu

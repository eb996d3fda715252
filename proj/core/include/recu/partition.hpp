#pragma once

#include <array>
#include <span>
#include <vector>

#include "recu/gadgets.hpp"
#include "recu/jet.hpp"
#include "recu/multi_index.hpp"
#include "recu/network.hpp"

namespace recu {

/// The bump psi as a signed sum of shifted ReCUs.
///  paper:   (2/3) sum c_i rho(3y/2 + s_i), support [-2, 2], knots from the printed weights.
///  bspline: (1/6)[rho(y+3) - 3rho(y+2) + 3rho(y+1) - 2rho(y) + 3rho(y-1) - 3rho(y-2) + rho(y-3)],
///           support [-3, 3], translates by 3 sum to one.
double psi(BumpVariant variant, double y);
double psi_derivative(BumpVariant variant, double y);

/// Half-width of supp psi.
double psi_support(BumpVariant variant);

/// The rising half h with psi(y) = h(y) h(-y); h == 1 for y >= 0.
double psi_rising_half(BumpVariant variant, double y);

/// Two-layer network realizing psi on all of R, with the printed weights for
/// the paper variant (24 weights, 10 neurons).
Network bump_network(BumpVariant variant);

/// Three-layer network realizing psi(y) = h(y) h(-y) through the product
/// gadget. Off the support one factor is exactly 0 in floating point, so the
/// realization is 0 up to a single rounding of the output layer instead of
/// the O(eps |y|^3) cancellation residue of bump_network.
Network bump_factor_network(BumpVariant variant);

struct PartitionSpec {
  int d = 1;
  int N = 1;
  BumpVariant variant = BumpVariant::bspline;

  int dims() const noexcept { return d + 1; }
  std::size_t cell_count() const;
};

void validate(const PartitionSpec& spec);

/// Scalar factor z -> psi(3N(z - j/N)) as a (d+1)-input network reading
/// coordinate `axis` (0 is t).
Network partition_factor_network(const PartitionSpec& spec, int axis, int j);

/// (d+1) inputs, (d+1) outputs, three layers; output l is psi(3N(z_l - mu_l/N)).
/// The product of the outputs is phi_mu. Throws ValidationError when mu is
/// outside {0..N}^{d+1}.
Network phi_mu_network(const PartitionSpec& spec, const MultiIndex& mu);

/// Closed-form phi_mu and its jet, for cross-checking the networks.
double phi_mu(const PartitionSpec& spec, const MultiIndex& mu, double t, std::span<const double> x);
Jet2 phi_mu_jet(const PartitionSpec& spec, const MultiIndex& mu, double t, std::span<const double> x);

/// Jet of a product of scalar factors given their jets.
Jet2 product_jet(const Jet2& f, const Jet2& g);

/// Sum over mu of phi_mu(t, x), every factor evaluated by its network.
/// `points` is (d+1) x P; the result has one entry per column.
std::vector<double> partition_sum(const PartitionSpec& spec, const RowMatrix& points);
double partition_sum(const PartitionSpec& spec, double t, std::span<const double> x);

/// Sup-norm measurements of phi_mu for every (n, k) in {0,1}^2.
struct BumpBounds {
  int N = 0;
  MultiIndex mu;
  /// Indexed [n][k].
  std::array<std::array<double, 2>, 2> seminorm{};
  std::array<std::array<double, 2>, 2> norm{};
  /// seminorm^(1/(n+k)) / N for n+k >= 1; entry [0][0] holds the sup of phi_mu.
  std::array<std::array<double, 2>, 2> implied_c{};
};

/// Samples phi_mu on a uniform grid over its support box with `nodes` points
/// per axis (nodes - 1 divisible by 4 puts the extremes of psi' on the grid),
/// using network jets of Phi_mu combined with the product rule. mu defaults to
/// the most central cell.
BumpBounds bump_seminorm_bounds(const PartitionSpec& spec, int nodes, MultiIndex mu = {});

}  // namespace recu

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recu/network.hpp"
#include "recu/oracle.hpp"
#include "recu/partition.hpp"
#include "recu/sobolev.hpp"
#include "recu/taylor.hpp"

namespace recu {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Appends identity gadgets of the given radius until the network has
/// `depth` layers. Exact while the outputs stay in [-radius, radius].
Network extend_depth(const Network& net, std::size_t depth, double radius);

/// Single-output network multiplying all outputs of `base` pairwise in a
/// balanced tree of product gadgets x_r; an odd factor at a level passes
/// through an identity gadget of radius r. `ranges` bounds the base outputs
/// (default [0, 1] each) and every intermediate range is checked against
/// [-r, r], throwing ConstructionError on violation. A one-output base is
/// returned unchanged.
Network product_of_outputs(const Network& base, double r, std::span<const Interval> ranges = {});

/// Number of product levels for F factors: ceil(log2 F).
int product_levels(int factors);

/// Product-gadget range used by the pipeline, (m + d)^2 + 1.
double product_radius(int m, int d);

/// phi_mu t^kappa x^alpha on [0,1]^{1+d}; exponent is time-first
/// (kappa, alpha_1, ..., alpha_d) with total degree <= m - 1. Every such
/// network for fixed (d, m) has the same depth: the factor list is padded with
/// constant-one factors to d + m factors.
Network localized_monomial_network(const PartitionSpec& spec, const MultiIndex& mu, const MultiIndex& exponent, int m);

/// Phi_sum . P(all localized monomials): one network realizing
/// sum_mu sum_e c_{mu,e} phi_mu t^e0 x^e. The last layer is the row of
/// coefficients.
Network assemble_P_network(const LocalPolynomials& polys, const PartitionSpec& spec);

/// Sparsity pattern shared by every assembled network with this
/// (d, m, N, variant): the pattern of the all-ones coefficient network.
ArchitectureMask assembly_mask(const PartitionSpec& spec, int m);

/// Size of that shared architecture (the all-ones coefficient network).
SizeAccount assembly_size(const PartitionSpec& spec, int m);

struct ApproxConfig {
  int d = 1;
  int m = 3;
  int n = 0;
  int k = 0;
  Exponent p = Exponent::infinity();
  Exponent q = Exponent::infinity();
  double eps = 0.01;
  double B = 1.0;
  double C = 1.0;
  BumpVariant variant = BumpVariant::bspline;
  /// Desk-scale guardrails (d <= 2, N <= 16, m <= 4) unless set.
  bool allow_large = false;
  int quadrature_nodes = 32;
};

void validate(const ApproxConfig& cfg);

/// N = ceil((eps' / (2 C B))^(-1/(m-n-k))) with eps' = sqrt(eps).
int big_N(const ApproxConfig& cfg);

struct AssemblyReport {
  int N = 0;
  double eps_prime = 0.0;
  SizeAccount partition_size;   // Phi_mu for one cell
  SizeAccount monomial_size;    // one localized monomial network
  SizeAccount total;            // the assembled network
  std::size_t subnetworks = 0;
  std::size_t mask_entries = 0;
  double target_norm = 0.0;     // ||u||_{W^{m,p}_{m,p}} on the unit box
  bool norm_budget_exceeded = false;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

struct Approximation {
  Network network;
  AssemblyReport report;
  std::optional<LocalizedApproximant> u_N;
};

/// Validation errors for bad configs; a norm above B only adds a warning.
Approximation approximate(const JetOracle& u, const ApproxConfig& cfg);

/// Norm ||u||_{W^{m,p}_{m,p}} over the unit box on the given grid.
double target_norm(const JetOracle& u, int m, const Exponent& p, const GridSpec& grid);

}  // namespace recu

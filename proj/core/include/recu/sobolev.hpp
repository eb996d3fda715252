#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "recu/multi_index.hpp"
#include "recu/network.hpp"
#include "recu/oracle.hpp"
#include "recu/quadrature.hpp"

namespace recu {

/// An integrability exponent in [1, inf].
struct Exponent {
  double value = 2.0;

  static Exponent infinity() { return {std::numeric_limits<double>::infinity()}; }
  bool is_infinite() const noexcept { return value == std::numeric_limits<double>::infinity(); }
  /// Accepts "inf", "infinity" or a number >= 1.
  static Exponent parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;
};

enum class NormMode { norm, seminorm };

/// W^{n,p}_{k,q} over (0,1) x (0,1)^d: n spatial, k temporal derivatives.
struct NormSpec {
  int n = 0;
  Exponent p;
  int k = 0;
  Exponent q;
  NormMode mode = NormMode::seminorm;

  std::string label() const;
};

void validate(const NormSpec& spec);

enum class GridRule { uniform_midpoint, gauss_legendre };

/// Nodes per axis. Finite exponents integrate with `rule`; infinite ones take
/// the max over a closed uniform grid with the same node count.
struct GridSpec {
  int nodes_t = 257;
  int nodes_x = 257;
  GridRule rule = GridRule::gauss_legendre;

  /// 257 per axis for d = 1, 65 per axis for d = 2 and above.
  static GridSpec defaults(int d);
};

void validate(const GridSpec& grid);

/// Tensor grid over a box: points are t-major with the spatial index
/// lexicographic (last axis fastest).
struct TensorGrid {
  int d = 1;
  QuadratureRule t;
  std::vector<QuadratureRule> x;  // one rule per spatial axis

  std::size_t spatial_size() const;
  std::size_t size() const { return t.size() * spatial_size(); }
  /// (1+d) x size() matrix of all points.
  RowMatrix points() const;
};

/// Defaults to the unit box (0,1)^{1+d}.
TensorGrid make_grid(const NormSpec& spec, const GridSpec& grid, int d);
TensorGrid make_grid(const NormSpec& spec, const GridSpec& grid, const Box& domain);

/// Derivative channels D_t^kappa D_x^alpha (time-first multi-indices) that the
/// spec reads.
std::vector<MultiIndex> required_channels(const NormSpec& spec, int d);

/// Samples of a field's derivative channels on a tensor grid; values[c][i] is
/// channel c at grid point i.
struct SampledField {
  TensorGrid grid;
  std::vector<MultiIndex> channels;
  std::vector<std::vector<double>> values;

  const std::vector<double>& channel(const MultiIndex& deriv) const;
};

/// Returns the requested channels (rows) at the given points (columns).
using ChannelSampler = std::function<RowMatrix(const RowMatrix& points, const std::vector<MultiIndex>& channels)>;

ChannelSampler oracle_sampler(const JetOracle& u);
/// Networks expose channels with kappa, |alpha| <= 1 only.
ChannelSampler network_sampler(const Network& net);
/// a f + b g, channelwise.
ChannelSampler combine(double a, ChannelSampler f, double b, ChannelSampler g);

SampledField sample(const ChannelSampler& f, const NormSpec& spec, const TensorGrid& grid);
SampledField sample(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, int d);

/// Inner L^p over x per time node, outer L^q over t; see NormSpec for how
/// derivative groups combine. Throws ValidationError on an empty grid.
double nested_norm(const SampledField& field, const NormSpec& spec);

double estimate_norm(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, int d);
double estimate_norm(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, const Box& domain);
double norm_of_network(const Network& net, const NormSpec& spec, const GridSpec& grid);
double norm_of_oracle(const JetOracle& u, const NormSpec& spec, const GridSpec& grid);
double norm_of_oracle(const JetOracle& u, const NormSpec& spec, const GridSpec& grid, const Box& domain);

struct ProductRuleCheck {
  bool passed = false;
  /// rhs - lhs of the three inequalities, for |fg|_{1,0}, |fg|_{0,1}, |fg|_{1,1}.
  double margin_space = 0.0;
  double margin_time = 0.0;
  double margin_mixed = 0.0;
};

/// The sup-norm product rule with unit constants, |.|_{n,k} being the
/// W^{n,inf}_{k,inf} seminorm estimated on the grid:
///   |fg|_{1,0} <= |f|_{1,0} |g|_{0,0} + |f|_{0,0} |g|_{1,0}
///   |fg|_{0,1} <= |f|_{0,1} |g|_{0,0} + |f|_{0,0} |g|_{0,1}
///   |fg|_{1,1} <= |f|_{1,1}|g|_{0,0} + |f|_{0,1}|g|_{1,0} + |f|_{1,0}|g|_{0,1} + |f|_{0,0}|g|_{1,1}
/// fg's derivatives come from the Leibniz rule on the oracles' jets.
ProductRuleCheck product_rule_check(const JetOracle& f, const JetOracle& g, const GridSpec& grid,
                                    double tolerance = 1e-12);

}  // namespace recu

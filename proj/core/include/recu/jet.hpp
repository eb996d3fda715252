#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "recu/network.hpp"

namespace recu {

/// Value and the derivatives needed for W^{n,p}_{k,q} with n, k in {0, 1}:
/// d/dt, d/dx_j and the mixed d/dt d/dx_j. The first network input is t.
struct Jet2 {
  double value = 0.0;
  double d_t = 0.0;
  Eigen::VectorXd d_x;
  Eigen::VectorXd d_tx;

  explicit Jet2(Eigen::Index d = 0) : d_x(Eigen::VectorXd::Zero(d)), d_tx(Eigen::VectorXd::Zero(d)) {}
  Eigen::Index dims() const noexcept { return d_x.size(); }
};

/// Forward-mode propagation of (value, d_t, d_x, d_tx) through every output.
std::vector<Jet2> eval_jets(const Network& net, double t, std::span<const double> x);

/// Single-output variant; throws ShapeError when output_dim != 1.
Jet2 eval_jet(const Network& net, double t, std::span<const double> x);

/// Jets of every output at many points, one row per output, one column per point.
struct JetBatch {
  RowMatrix value;
  RowMatrix d_t;
  std::vector<RowMatrix> d_x;
  std::vector<RowMatrix> d_tx;

  Jet2 at(Eigen::Index output, Eigen::Index point) const;
};

/// `points` is (1+d) x P.
JetBatch eval_jet_batch(const Network& net, const RowMatrix& points);

/// Worst relative deviation between eval_jet and central differences of
/// realize(). First derivatives use step h, the mixed derivative uses 10h so
/// that roundoff (~eps/h^2) stays below 1e-6. The point must be farther than
/// 20h from activation kinks along the probed axes. Throws ValidationError
/// for h <= 0.
double finite_difference_check(const Network& net, double t, std::span<const double> x, double h);

}  // namespace recu

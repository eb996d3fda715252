#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "recu/errors.hpp"

namespace recu {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
/// Points are stored column-wise: one row per coordinate, one column per point.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Rectified power unit rho_s(x) = max(0, x)^s. rho_0 is the Heaviside step
/// (value 1 for x > 0), rho_1 is ReLU. Derivatives use the right-continuous
/// convention at the kink: rho'(0) = rho''(0) = 0 for s >= 2.
struct Activation {
  int power = 3;

  double operator()(double x) const noexcept;
  double first_derivative(double x) const noexcept;
  double second_derivative(double x) const noexcept;

  std::string name() const;
  static Activation from_name(const std::string& name);

  friend bool operator==(const Activation&, const Activation&) = default;
};

inline constexpr Activation kReCU{3};

/// One affine map (A, b). Exact zeros are never stored, so nonzeros() is the
/// l0 count of A.
class Layer {
 public:
  Layer(SparseMatrix weights, Eigen::VectorXd bias);

  static Layer from_dense(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias);

  Eigen::Index rows() const noexcept { return weights_.rows(); }
  Eigen::Index cols() const noexcept { return weights_.cols(); }

  const SparseMatrix& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& bias() const noexcept { return bias_; }
  Eigen::MatrixXd dense_weights() const { return Eigen::MatrixXd(weights_); }

  std::size_t weight_nonzeros() const noexcept;
  std::size_t bias_nonzeros() const noexcept;

  friend bool operator==(const Layer& a, const Layer& b);

 private:
  SparseMatrix weights_;
  Eigen::VectorXd bias_;
};

/// A strictly layered feed-forward network ((A_1,b_1),...,(A_L,b_L)).
/// Immutable once built; realization is reentrant.
class Network {
 public:
  Network(Eigen::Index input_dim, std::vector<Layer> layers, Activation activation = kReCU);

  Eigen::Index input_dim() const noexcept { return input_dim_; }
  Eigen::Index output_dim() const noexcept { return layers_.back().rows(); }
  std::size_t depth() const noexcept { return layers_.size(); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const Layer& layer(std::size_t i) const { return layers_.at(i); }
  const Activation& activation() const noexcept { return activation_; }

  friend bool operator==(const Network& a, const Network& b);

 private:
  Eigen::Index input_dim_;
  std::vector<Layer> layers_;
  Activation activation_;
};

struct SizeAccount {
  std::size_t depth = 0;
  std::size_t neurons = 0;
  std::size_t weights = 0;
  std::size_t output_dim = 0;

  friend bool operator==(const SizeAccount&, const SizeAccount&) = default;
};

/// Sparsity pattern of a network. A network has this architecture if its
/// layer shapes agree and all its nonzeros sit on true positions.
struct ArchitectureMask {
  Eigen::Index input_dim = 0;
  std::vector<SparseMatrix> weight_patterns;  // stored entries are the true positions
  std::vector<std::vector<bool>> bias_patterns;

  std::size_t true_entries() const;
};

std::vector<double> realize(const Network& net, std::span<const double> input);
std::vector<double> realize(const Network& net, std::initializer_list<double> input);

/// Realize many points at once. `inputs` is input_dim x P; the result is
/// output_dim x P.
RowMatrix realize_batch(const Network& net, const RowMatrix& inputs);

/// phi1 . phi2, i.e. the network realizing R(phi1) o R(phi2).
Network concatenate(const Network& phi1, const Network& phi2);

/// Shared-input stacking of equal-depth networks; outputs are concatenated.
Network parallelize(const Network& phi1, const Network& phi2);
Network parallelize(std::span<const Network> nets);

/// Disjoint-input stacking of equal-depth networks: the input is the
/// concatenation of the blocks' inputs and every layer is block diagonal.
Network block_diagonal(std::span<const Network> nets);

/// One-layer network x -> A x + b.
Network affine_network(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                       Activation activation = kReCU);

SizeAccount size_account(const Network& net);

ArchitectureMask architecture_of(const Network& net);
ArchitectureMask full_mask(const Network& net);
bool matches_architecture(const Network& net, const ArchitectureMask& mask);

}  // namespace recu

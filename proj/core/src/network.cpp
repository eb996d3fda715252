#include "recu/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace recu {

namespace {

double positive_power(double x, int s) {
  double out = 1.0;
  for (int i = 0; i < s; ++i) out *= x;
  return out;
}

SparseMatrix pruned(SparseMatrix m) {
  m.prune(0.0, 0.0);
  m.makeCompressed();
  return m;
}

void check_finite(const SparseMatrix& w, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
      if (!std::isfinite(it.value())) {
        throw ValidationError("layer weight (" + std::to_string(it.row()) + ", " +
                              std::to_string(it.col()) + ") is not finite");
      }
    }
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (!std::isfinite(b[i])) {
      throw ValidationError("layer bias entry " + std::to_string(i) + " is not finite");
    }
  }
}

void apply_activation(const Activation& rho, RowMatrix& z) {
  z = z.unaryExpr([&rho](double v) { return rho(v); });
}

}  // namespace

double Activation::operator()(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  return positive_power(x, power);
}

double Activation::first_derivative(double x) const noexcept {
  if (x <= 0.0 || power == 0) return 0.0;
  return power * positive_power(x, power - 1);
}

double Activation::second_derivative(double x) const noexcept {
  if (x <= 0.0 || power < 2) return 0.0;
  return power * (power - 1) * positive_power(x, power - 2);
}

std::string Activation::name() const { return "rho" + std::to_string(power); }

Activation Activation::from_name(const std::string& name) {
  if (name.size() > 3 && name.rfind("rho", 0) == 0) {
    const std::string digits = name.substr(3);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return Activation{std::stoi(digits)};
    }
  }
  throw ValidationError("unknown activation '" + name + "'");
}

Layer::Layer(SparseMatrix weights, Eigen::VectorXd bias)
    : weights_(pruned(std::move(weights))), bias_(std::move(bias)) {
  if (weights_.rows() != bias_.size()) {
    throw ShapeError("layer has " + std::to_string(weights_.rows()) + " weight rows but bias of length " +
                     std::to_string(bias_.size()));
  }
  if (weights_.rows() == 0 || weights_.cols() == 0) {
    throw ShapeError("layer with an empty dimension");
  }
  check_finite(weights_, bias_);
}

Layer Layer::from_dense(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias) {
  return Layer(weights.sparseView(0.0, 0.0), bias);
}

std::size_t Layer::weight_nonzeros() const noexcept {
  return static_cast<std::size_t>(weights_.nonZeros());
}

std::size_t Layer::bias_nonzeros() const noexcept {
  return static_cast<std::size_t>((bias_.array() != 0.0).count());
}

bool operator==(const Layer& a, const Layer& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.bias_ != b.bias_) return false;
  if (a.weights_.nonZeros() != b.weights_.nonZeros()) return false;
  for (Eigen::Index i = 0; i < a.weights_.outerSize(); ++i) {
    SparseMatrix::InnerIterator ia(a.weights_, i);
    SparseMatrix::InnerIterator ib(b.weights_, i);
    for (; ia && ib; ++ia, ++ib) {
      if (ia.col() != ib.col() || ia.value() != ib.value()) return false;
    }
    if (ia || ib) return false;
  }
  return true;
}

Network::Network(Eigen::Index input_dim, std::vector<Layer> layers, Activation activation)
    : input_dim_(input_dim), layers_(std::move(layers)), activation_(activation) {
  if (input_dim_ <= 0) throw ShapeError("network input dimension must be positive");
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  Eigen::Index previous = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].cols() != previous) {
      throw ShapeError("layer " + std::to_string(l + 1) + " expects " + std::to_string(layers_[l].cols()) +
                       " inputs but the previous layer provides " + std::to_string(previous));
    }
    previous = layers_[l].rows();
  }
}

bool operator==(const Network& a, const Network& b) {
  return a.input_dim_ == b.input_dim_ && a.activation_ == b.activation_ && a.layers_ == b.layers_;
}

std::size_t ArchitectureMask::true_entries() const {
  std::size_t n = 0;
  for (const auto& w : weight_patterns) n += static_cast<std::size_t>(w.nonZeros());
  for (const auto& b : bias_patterns) n += static_cast<std::size_t>(std::count(b.begin(), b.end(), true));
  return n;
}

std::vector<double> realize(const Network& net, std::span<const double> input) {
  if (static_cast<Eigen::Index>(input.size()) != net.input_dim()) {
    throw ShapeError("input of length " + std::to_string(input.size()) + " for a network with input dimension " +
                     std::to_string(net.input_dim()));
  }
  RowMatrix x(net.input_dim(), 1);
  for (std::size_t i = 0; i < input.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = input[i];
  const RowMatrix y = realize_batch(net, x);
  return std::vector<double>(y.data(), y.data() + y.size());
}

std::vector<double> realize(const Network& net, std::initializer_list<double> input) {
  return realize(net, std::span<const double>(input.begin(), input.size()));
}

RowMatrix realize_batch(const Network& net, const RowMatrix& inputs) {
  if (inputs.rows() != net.input_dim()) {
    throw ShapeError("batch with " + std::to_string(inputs.rows()) + " rows for a network with input dimension " +
                     std::to_string(net.input_dim()));
  }
  const auto& layers = net.layers();
  // Wide networks are evaluated in column chunks so one layer's activations stay around 32 MB.
  Eigen::Index width = net.input_dim();
  for (const auto& layer : layers) width = std::max(width, layer.rows());
  const Eigen::Index chunk = std::max<Eigen::Index>(1, (Eigen::Index{1} << 22) / width);
  RowMatrix out(net.output_dim(), inputs.cols());
  for (Eigen::Index start = 0; start < inputs.cols(); start += chunk) {
    const Eigen::Index len = std::min(chunk, inputs.cols() - start);
    RowMatrix x = inputs.middleCols(start, len);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      RowMatrix z = layers[l].weights() * x;
      z.colwise() += layers[l].bias();
      if (l + 1 < layers.size()) apply_activation(net.activation(), z);
      x = std::move(z);
    }
    out.middleCols(start, len) = x;
  }
  return out;
}

Network concatenate(const Network& phi1, const Network& phi2) {
  if (phi2.output_dim() != phi1.input_dim()) {
    throw ShapeError("cannot concatenate: inner network has " + std::to_string(phi2.output_dim()) +
                     " outputs, outer network expects " + std::to_string(phi1.input_dim()));
  }
  if (!(phi1.activation() == phi2.activation())) {
    throw ShapeError("cannot concatenate networks with different activations");
  }
  std::vector<Layer> layers;
  layers.reserve(phi1.depth() + phi2.depth() - 1);
  for (std::size_t l = 0; l + 1 < phi2.depth(); ++l) layers.push_back(phi2.layer(l));

  const Layer& first = phi1.layer(0);
  const Layer& last = phi2.layer(phi2.depth() - 1);
  SparseMatrix fused = (first.weights() * last.weights()).pruned();
  Eigen::VectorXd fused_bias = first.weights() * last.bias() + first.bias();
  layers.emplace_back(std::move(fused), std::move(fused_bias));

  for (std::size_t l = 1; l < phi1.depth(); ++l) layers.push_back(phi1.layer(l));
  return Network(phi2.input_dim(), std::move(layers), phi1.activation());
}

namespace {

Network stack(std::span<const Network> nets, bool shared_input) {
  if (nets.empty()) throw ShapeError("cannot stack an empty list of networks");
  const std::size_t depth = nets[0].depth();
  const Activation act = nets[0].activation();
  Eigen::Index input_dim = 0;
  for (const auto& n : nets) {
    if (n.depth() != depth) throw ShapeError("stacked networks must have equal depth");
    if (!(n.activation() == act)) throw ShapeError("stacked networks must share the activation");
    if (shared_input && n.input_dim() != nets[0].input_dim()) {
      throw ShapeError("parallelized networks must have equal input dimension");
    }
    input_dim = shared_input ? n.input_dim() : input_dim + n.input_dim();
  }

  std::vector<Layer> layers;
  layers.reserve(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::size_t nnz = 0;
    for (const auto& n : nets) {
      rows += n.layer(l).rows();
      cols = (l == 0 && shared_input) ? n.layer(l).cols() : cols + n.layer(l).cols();
      nnz += n.layer(l).weight_nonzeros();
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(nnz);
    Eigen::VectorXd bias(rows);
    Eigen::Index row_offset = 0;
    Eigen::Index col_offset = 0;
    for (const auto& n : nets) {
      const Layer& layer = n.layer(l);
      const SparseMatrix& w = layer.weights();
      for (Eigen::Index i = 0; i < w.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(w, i); it; ++it) {
          triplets.emplace_back(row_offset + it.row(), col_offset + it.col(), it.value());
        }
      }
      bias.segment(row_offset, layer.rows()) = layer.bias();
      row_offset += layer.rows();
      if (!(l == 0 && shared_input)) col_offset += layer.cols();
    }
    SparseMatrix w(rows, cols);
    w.setFromTriplets(triplets.begin(), triplets.end());
    layers.emplace_back(std::move(w), std::move(bias));
  }
  return Network(input_dim, std::move(layers), act);
}

}  // namespace

Network parallelize(const Network& phi1, const Network& phi2) {
  const Network pair[] = {phi1, phi2};
  return parallelize(pair);
}

Network parallelize(std::span<const Network> nets) { return stack(nets, true); }

Network block_diagonal(std::span<const Network> nets) { return stack(nets, false); }

Network affine_network(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias, Activation activation) {
  return Network(weights.cols(), {Layer::from_dense(weights, bias)}, activation);
}

SizeAccount size_account(const Network& net) {
  SizeAccount acc;
  acc.depth = net.depth();
  acc.neurons = static_cast<std::size_t>(net.input_dim());
  for (const auto& layer : net.layers()) {
    acc.neurons += static_cast<std::size_t>(layer.rows());
    acc.weights += layer.weight_nonzeros() + layer.bias_nonzeros();
  }
  acc.output_dim = static_cast<std::size_t>(net.output_dim());
  return acc;
}

ArchitectureMask architecture_of(const Network& net) {
  ArchitectureMask mask;
  mask.input_dim = net.input_dim();
  for (const auto& layer : net.layers()) {
    SparseMatrix pattern = layer.weights();
    for (Eigen::Index i = 0; i < pattern.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(pattern, i); it; ++it) it.valueRef() = 1.0;
    }
    mask.weight_patterns.push_back(std::move(pattern));
    std::vector<bool> bias(static_cast<std::size_t>(layer.rows()));
    for (Eigen::Index i = 0; i < layer.rows(); ++i) bias[static_cast<std::size_t>(i)] = layer.bias()[i] != 0.0;
    mask.bias_patterns.push_back(std::move(bias));
  }
  return mask;
}

ArchitectureMask full_mask(const Network& net) {
  ArchitectureMask mask;
  mask.input_dim = net.input_dim();
  for (const auto& layer : net.layers()) {
    mask.weight_patterns.push_back(Eigen::MatrixXd::Ones(layer.rows(), layer.cols()).sparseView());
    mask.bias_patterns.emplace_back(static_cast<std::size_t>(layer.rows()), true);
  }
  return mask;
}

bool matches_architecture(const Network& net, const ArchitectureMask& mask) {
  if (net.input_dim() != mask.input_dim) return false;
  if (net.depth() != mask.weight_patterns.size() || net.depth() != mask.bias_patterns.size()) return false;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const Layer& layer = net.layer(l);
    const SparseMatrix& pattern = mask.weight_patterns[l];
    if (layer.rows() != pattern.rows() || layer.cols() != pattern.cols()) return false;
    if (static_cast<Eigen::Index>(mask.bias_patterns[l].size()) != layer.rows()) return false;
    for (Eigen::Index i = 0; i < layer.weights().outerSize(); ++i) {
      SparseMatrix::InnerIterator allowed(pattern, i);
      for (SparseMatrix::InnerIterator it(layer.weights(), i); it; ++it) {
        while (allowed && (allowed.col() < it.col() || allowed.value() == 0.0)) ++allowed;
        if (!allowed || allowed.col() != it.col()) return false;
      }
    }
    for (Eigen::Index i = 0; i < layer.rows(); ++i) {
      if (layer.bias()[i] != 0.0 && !mask.bias_patterns[l][static_cast<std::size_t>(i)]) return false;
    }
  }
  return true;
}

}  // namespace recu

#pragma once

// Hand-rolled generators shared by the property tests.

#include <cmath>
#include <random>
#include <vector>

#include "recu/network.hpp"

namespace recu::testing {

inline RowMatrix random_points(std::mt19937_64& rng, int rows, Eigen::Index count, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  RowMatrix pts(rows, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    for (int r = 0; r < rows; ++r) pts(r, c) = dist(rng);
  }
  return pts;
}

// Weights stay small so cubic layers do not blow up over a few layers.
inline Network random_network(std::mt19937_64& rng, Eigen::Index in, Eigen::Index out, int depth, int max_width = 5,
                              double density = 0.7, double scale = 0.7) {
  std::uniform_int_distribution<int> width(1, max_width);
  std::uniform_real_distribution<double> value(-scale, scale);
  std::bernoulli_distribution keep(density);
  std::vector<Layer> layers;
  Eigen::Index cols = in;
  for (int l = 0; l < depth; ++l) {
    const Eigen::Index rows = l + 1 == depth ? out : width(rng);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = keep(rng) ? value(rng) : 0.0;
      b[i] = keep(rng) ? value(rng) : 0.0;
    }
    layers.push_back(Layer::from_dense(a, b));
    cols = rows;
  }
  return Network(in, std::move(layers));
}

inline double max_relative_gap(const RowMatrix& a, const RowMatrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a(i) - b(i)) / (1.0 + std::abs(b(i))));
  }
  return worst;
}

}  // namespace recu::testing

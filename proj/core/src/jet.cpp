#include "recu/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace recu {

namespace {

// Jets are propagated as one matrix per layer whose columns are grouped by
// slot: [value | d_t | d_x1..d_xd | d_tx1..d_txd], P columns per slot.
RowMatrix propagate(const Network& net, const RowMatrix& points) {
  const Eigen::Index dim = net.input_dim();
  const Eigen::Index d = dim - 1;
  const Eigen::Index p = points.cols();
  const Eigen::Index slots = 2 + 2 * d;

  RowMatrix x = RowMatrix::Zero(dim, slots * p);
  x.leftCols(p) = points;
  x.block(0, p, 1, p).setOnes();
  for (Eigen::Index j = 0; j < d; ++j) x.block(j + 1, (2 + j) * p, 1, p).setOnes();

  const Activation& rho = net.activation();
  const auto& layers = net.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    RowMatrix z = layers[l].weights() * x;
    z.leftCols(p).colwise() += layers[l].bias();
    if (l + 1 < layers.size()) {
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        double* row = z.row(r).data();
        for (Eigen::Index c = 0; c < p; ++c) {
          const double g = row[c];
          const double g_t = row[p + c];
          const double r1 = rho.first_derivative(g);
          const double r2 = rho.second_derivative(g);
          row[c] = rho(g);
          row[p + c] = r1 * g_t;
          for (Eigen::Index j = 0; j < d; ++j) {
            double& g_x = row[(2 + j) * p + c];
            double& g_tx = row[(2 + d + j) * p + c];
            g_tx = r2 * g_t * g_x + r1 * g_tx;
            g_x = r1 * g_x;
          }
        }
      }
    }
    x = std::move(z);
  }
  return x;
}

Jet2 extract(const RowMatrix& out, Eigen::Index row, Eigen::Index col, Eigen::Index p, Eigen::Index d) {
  Jet2 jet(d);
  jet.value = out(row, col);
  jet.d_t = out(row, p + col);
  for (Eigen::Index j = 0; j < d; ++j) {
    jet.d_x[j] = out(row, (2 + j) * p + col);
    jet.d_tx[j] = out(row, (2 + d + j) * p + col);
  }
  return jet;
}

RowMatrix single_point(const Network& net, double t, std::span<const double> x) {
  if (static_cast<Eigen::Index>(x.size()) + 1 != net.input_dim()) {
    throw ShapeError("jet evaluation at a point of dimension " + std::to_string(x.size() + 1) +
                     " for a network with input dimension " + std::to_string(net.input_dim()));
  }
  RowMatrix pt(net.input_dim(), 1);
  pt(0, 0) = t;
  for (std::size_t j = 0; j < x.size(); ++j) pt(static_cast<Eigen::Index>(j) + 1, 0) = x[j];
  return pt;
}

}  // namespace

std::vector<Jet2> eval_jets(const Network& net, double t, std::span<const double> x) {
  const RowMatrix out = propagate(net, single_point(net, t, x));
  std::vector<Jet2> jets;
  jets.reserve(static_cast<std::size_t>(out.rows()));
  for (Eigen::Index r = 0; r < out.rows(); ++r) jets.push_back(extract(out, r, 0, 1, net.input_dim() - 1));
  return jets;
}

Jet2 eval_jet(const Network& net, double t, std::span<const double> x) {
  if (net.output_dim() != 1) throw ShapeError("eval_jet needs a single-output network");
  return eval_jets(net, t, x).front();
}

Jet2 JetBatch::at(Eigen::Index output, Eigen::Index point) const {
  const auto d = static_cast<Eigen::Index>(d_x.size());
  Jet2 jet(d);
  jet.value = value(output, point);
  jet.d_t = d_t(output, point);
  for (Eigen::Index j = 0; j < d; ++j) {
    jet.d_x[j] = d_x[static_cast<std::size_t>(j)](output, point);
    jet.d_tx[j] = d_tx[static_cast<std::size_t>(j)](output, point);
  }
  return jet;
}

JetBatch eval_jet_batch(const Network& net, const RowMatrix& points) {
  if (points.rows() != net.input_dim()) throw ShapeError("point batch does not match the network input dimension");
  const Eigen::Index p = points.cols();
  const Eigen::Index d = net.input_dim() - 1;
  const RowMatrix out = propagate(net, points);
  JetBatch batch;
  batch.value = out.leftCols(p);
  batch.d_t = out.middleCols(p, p);
  for (Eigen::Index j = 0; j < d; ++j) {
    batch.d_x.push_back(out.middleCols((2 + j) * p, p));
    batch.d_tx.push_back(out.middleCols((2 + d + j) * p, p));
  }
  return batch;
}

double finite_difference_check(const Network& net, double t, std::span<const double> x, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("finite difference step must be positive");
  const Jet2 jet = eval_jet(net, t, x);
  const std::size_t d = x.size();
  std::vector<double> point(d + 1);
  auto f = [&](double dt, std::size_t axis, double dx) {
    point[0] = t + dt;
    for (std::size_t j = 0; j < d; ++j) point[j + 1] = x[j] + (j == axis ? dx : 0.0);
    return realize(net, point).front();
  };
  auto deviation = [](double fd, double exact) { return std::abs(fd - exact) / std::max(1.0, std::abs(exact)); };

  const std::size_t none = d;
  double worst = deviation((f(h, none, 0.0) - f(-h, none, 0.0)) / (2.0 * h), jet.d_t);
  const double hm = 10.0 * h;
  for (std::size_t j = 0; j < d; ++j) {
    const double fx = (f(0.0, j, h) - f(0.0, j, -h)) / (2.0 * h);
    worst = std::max(worst, deviation(fx, jet.d_x[static_cast<Eigen::Index>(j)]));
    const double ftx = (f(hm, j, hm) - f(hm, j, -hm) - f(-hm, j, hm) + f(-hm, j, -hm)) / (4.0 * hm * hm);
    worst = std::max(worst, deviation(ftx, jet.d_tx[static_cast<Eigen::Index>(j)]));
  }
  return worst;
}

}  // namespace recu

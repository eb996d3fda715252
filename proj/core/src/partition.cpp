#include "recu/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace recu {

namespace {

struct Expansion {
  double scale;  // psi(y) = coef * sum c_i rho(scale * y + s_i)
  double coef;
  std::vector<double> shifts;
  std::vector<double> weights;
};

const Expansion& expansion(BumpVariant variant) {
  static const Expansion paper{1.5, 2.0 / 3.0,
                               {3.0, 2.5, 1.5, 1.0, -1.0, -1.5, -2.5, -3.0},
                               {1.0, -2.0, 2.0, -1.0, -1.0, 2.0, -2.0, 1.0}};
  static const Expansion bspline{1.0, 1.0 / 6.0,
                                 {3.0, 2.0, 1.0, 0.0, -1.0, -2.0, -3.0},
                                 {1.0, -3.0, 3.0, -2.0, 3.0, -3.0, 1.0}};
  return variant == BumpVariant::paper ? paper : bspline;
}

// The rising half uses the first four knots of the paper expansion and the
// third difference for the B-spline.
const Expansion& rising_half(BumpVariant variant) {
  static const Expansion paper{1.5, 2.0 / 3.0, {3.0, 2.5, 1.5, 1.0}, {1.0, -2.0, 2.0, -1.0}};
  static const Expansion bspline{1.0, 1.0 / 6.0, {3.0, 2.0, 1.0, 0.0}, {1.0, -3.0, 3.0, -1.0}};
  return variant == BumpVariant::paper ? paper : bspline;
}

double sum_rho(const Expansion& e, double y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < e.shifts.size(); ++i) acc += e.weights[i] * kReCU(e.scale * y + e.shifts[i]);
  return e.coef * acc;
}

double sum_rho_derivative(const Expansion& e, double y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < e.shifts.size(); ++i) {
    acc += e.weights[i] * kReCU.first_derivative(e.scale * y + e.shifts[i]);
  }
  return e.coef * e.scale * acc;
}

// psi restricted to its support, exact zero outside.
double psi_local(BumpVariant variant, double y) {
  return std::abs(y) >= psi_support(variant) ? 0.0 : psi(variant, y);
}

double psi_local_derivative(BumpVariant variant, double y) {
  return std::abs(y) >= psi_support(variant) ? 0.0 : psi_derivative(variant, y);
}

double coordinate(double t, std::span<const double> x, int axis) {
  return axis == 0 ? t : x[static_cast<std::size_t>(axis - 1)];
}

void check_mu(const PartitionSpec& spec, const MultiIndex& mu) {
  if (static_cast<int>(mu.size()) != spec.dims()) {
    throw ShapeError("cell index has " + std::to_string(mu.size()) + " entries, expected " +
                     std::to_string(spec.dims()));
  }
  for (int v : mu) {
    if (v < 0 || v > spec.N) throw ValidationError("cell index entry " + std::to_string(v) + " outside 0.." + std::to_string(spec.N));
  }
}

}  // namespace

double psi(BumpVariant variant, double y) { return sum_rho(expansion(variant), y); }

double psi_derivative(BumpVariant variant, double y) { return sum_rho_derivative(expansion(variant), y); }

double psi_support(BumpVariant variant) { return variant == BumpVariant::paper ? 2.0 : 3.0; }

double psi_rising_half(BumpVariant variant, double y) { return sum_rho(rising_half(variant), y); }

Network bump_network(BumpVariant variant) {
  const Expansion& e = expansion(variant);
  const auto width = static_cast<Eigen::Index>(e.shifts.size());
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Constant(width, 1, e.scale);
  Eigen::VectorXd b1(width);
  Eigen::MatrixXd a2(1, width);
  for (Eigen::Index i = 0; i < width; ++i) {
    b1[i] = e.shifts[static_cast<std::size_t>(i)];
    a2(0, i) = e.coef * e.weights[static_cast<std::size_t>(i)];
  }
  return Network(1, {Layer::from_dense(a1, b1), Layer::from_dense(a2, Eigen::VectorXd::Zero(1))});
}

Network bump_factor_network(BumpVariant variant) {
  // y -> (h(y), h(-y)), then the exact product on [-1, 1]^2.
  const Expansion& h = rising_half(variant);
  const Eigen::Index half = static_cast<Eigen::Index>(h.shifts.size());
  Eigen::MatrixXd a1(2 * half, 1);
  Eigen::VectorXd b1(2 * half);
  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(2, 2 * half);
  for (Eigen::Index i = 0; i < half; ++i) {
    const auto s = static_cast<std::size_t>(i);
    a1(i, 0) = h.scale;
    a1(half + i, 0) = -h.scale;
    b1[i] = b1[half + i] = h.shifts[s];
    a2(0, i) = a2(1, half + i) = h.coef * h.weights[s];
  }
  const Network halves(1, {Layer::from_dense(a1, b1), Layer::from_dense(a2, Eigen::VectorXd::Zero(2))});
  return concatenate(gadgets::product(1.0), halves);
}

std::size_t PartitionSpec::cell_count() const {
  std::size_t count = 1;
  for (int l = 0; l < dims(); ++l) count *= static_cast<std::size_t>(N + 1);
  return count;
}

void validate(const PartitionSpec& spec) {
  if (spec.d < 1) throw ValidationError("spatial dimension must be at least 1");
  if (spec.N < 1) throw ValidationError("N must be at least 1");
}

Network partition_factor_network(const PartitionSpec& spec, int axis, int j) {
  validate(spec);
  if (axis < 0 || axis > spec.d) throw ValidationError("axis " + std::to_string(axis) + " out of range");
  if (j < 0 || j > spec.N) throw ValidationError("grid index " + std::to_string(j) + " out of range");
  Eigen::MatrixXd select = Eigen::MatrixXd::Zero(1, spec.dims());
  select(0, axis) = 3.0 * spec.N;
  const Network shift = affine_network(select, Eigen::VectorXd::Constant(1, -3.0 * j));
  return concatenate(bump_factor_network(spec.variant), shift);
}

Network phi_mu_network(const PartitionSpec& spec, const MultiIndex& mu) {
  validate(spec);
  check_mu(spec, mu);
  std::vector<Network> factors;
  factors.reserve(mu.size());
  for (int l = 0; l < spec.dims(); ++l) factors.push_back(partition_factor_network(spec, l, mu[static_cast<std::size_t>(l)]));
  return parallelize(factors);
}

double phi_mu(const PartitionSpec& spec, const MultiIndex& mu, double t, std::span<const double> x) {
  check_mu(spec, mu);
  double value = 1.0;
  for (int l = 0; l < spec.dims() && value != 0.0; ++l) {
    value *= psi_local(spec.variant, 3.0 * spec.N * coordinate(t, x, l) - 3.0 * mu[static_cast<std::size_t>(l)]);
  }
  return value;
}

Jet2 product_jet(const Jet2& f, const Jet2& g) {
  if (f.dims() != g.dims()) throw ShapeError("jet dimensions differ");
  Jet2 r(f.dims());
  r.value = f.value * g.value;
  r.d_t = f.d_t * g.value + f.value * g.d_t;
  r.d_x = f.d_x * g.value + f.value * g.d_x;
  r.d_tx = f.d_tx * g.value + f.d_x * g.d_t + f.d_t * g.d_x + f.value * g.d_tx;
  return r;
}

Jet2 phi_mu_jet(const PartitionSpec& spec, const MultiIndex& mu, double t, std::span<const double> x) {
  check_mu(spec, mu);
  const auto d = static_cast<Eigen::Index>(spec.d);
  const double scale = 3.0 * spec.N;
  Jet2 acc(d);
  acc.value = 1.0;
  for (int l = 0; l < spec.dims(); ++l) {
    const double y = scale * coordinate(t, x, l) - 3.0 * mu[static_cast<std::size_t>(l)];
    Jet2 factor(d);
    factor.value = psi_local(spec.variant, y);
    const double slope = scale * psi_local_derivative(spec.variant, y);
    if (l == 0) {
      factor.d_t = slope;
    } else {
      factor.d_x[l - 1] = slope;
    }
    acc = product_jet(acc, factor);
  }
  return acc;
}

std::vector<double> partition_sum(const PartitionSpec& spec, const RowMatrix& points) {
  validate(spec);
  if (points.rows() != spec.dims()) throw ShapeError("points must have d+1 rows");
  // One network holding every distinct factor psi(3N z_l - 3j), row l*(N+1)+j.
  std::vector<Network> factors;
  for (int l = 0; l < spec.dims(); ++l) {
    for (int j = 0; j <= spec.N; ++j) factors.push_back(partition_factor_network(spec, l, j));
  }
  const RowMatrix values = realize_batch(parallelize(factors), points);

  const std::vector<MultiIndex> cells = box_indices(spec.dims(), spec.N);
  std::vector<double> sums(static_cast<std::size_t>(points.cols()), 0.0);
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    double total = 0.0;
    for (const MultiIndex& mu : cells) {
      double prod = 1.0;
      for (int l = 0; l < spec.dims(); ++l) prod *= values(l * (spec.N + 1) + mu[static_cast<std::size_t>(l)], p);
      total += prod;
    }
    sums[static_cast<std::size_t>(p)] = total;
  }
  return sums;
}

double partition_sum(const PartitionSpec& spec, double t, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.d) throw ShapeError("point dimension does not match the partition");
  RowMatrix pt(spec.dims(), 1);
  pt(0, 0) = t;
  for (int j = 0; j < spec.d; ++j) pt(j + 1, 0) = x[static_cast<std::size_t>(j)];
  return partition_sum(spec, pt).front();
}

BumpBounds bump_seminorm_bounds(const PartitionSpec& spec, int nodes, MultiIndex mu) {
  validate(spec);
  if (nodes < 2) throw ValidationError("need at least two sample nodes per axis");
  if (mu.empty()) mu.assign(static_cast<std::size_t>(spec.dims()), spec.N / 2);
  check_mu(spec, mu);

  const Network net = phi_mu_network(spec, mu);
  const int dims = spec.dims();
  std::size_t total = 1;
  for (int l = 0; l < dims; ++l) total *= static_cast<std::size_t>(nodes);

  RowMatrix points(dims, static_cast<Eigen::Index>(total));
  const double h = psi_support(spec.variant) / (3.0 * spec.N);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (int l = dims - 1; l >= 0; --l) {
      const auto i = static_cast<int>(rest % static_cast<std::size_t>(nodes));
      rest /= static_cast<std::size_t>(nodes);
      const double center = static_cast<double>(mu[static_cast<std::size_t>(l)]) / spec.N;
      points(l, static_cast<Eigen::Index>(p)) = center - h + 2.0 * h * i / (nodes - 1);
    }
  }

  const JetBatch jets = eval_jet_batch(net, points);
  BumpBounds out;
  out.N = spec.N;
  out.mu = mu;
  auto& s = out.seminorm;
  for (Eigen::Index p = 0; p < points.cols(); ++p) {
    Jet2 phi = jets.at(0, p);
    for (Eigen::Index l = 1; l < dims; ++l) phi = product_jet(phi, jets.at(l, p));
    s[0][0] = std::max(s[0][0], std::abs(phi.value));
    s[0][1] = std::max(s[0][1], std::abs(phi.d_t));
    for (Eigen::Index j = 0; j < phi.dims(); ++j) {
      s[1][0] = std::max(s[1][0], std::abs(phi.d_x[j]));
      s[1][1] = std::max(s[1][1], std::abs(phi.d_tx[j]));
    }
  }
  // Sup-norm of the full norm: largest of the lower-order seminorms.
  out.norm[0][0] = s[0][0];
  out.norm[0][1] = s[0][0] + s[0][1];
  out.norm[1][0] = std::max(s[0][0], s[1][0]);
  out.norm[1][1] = std::max(s[0][0], s[1][0]) + std::max(s[0][1], s[1][1]);
  out.implied_c[0][0] = s[0][0];
  for (int n = 0; n < 2; ++n) {
    for (int k = 0; k < 2; ++k) {
      if (n + k > 0) out.implied_c[n][k] = std::pow(s[n][k], 1.0 / (n + k)) / spec.N;
    }
  }
  return out;
}

}  // namespace recu

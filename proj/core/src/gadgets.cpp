#include "recu/gadgets.hpp"

#include <cmath>
#include <string>

#include "recu/partition.hpp"

namespace recu::gadgets {

namespace {

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("gadget radius must be positive, got " + std::to_string(r));
}

Network two_layer(const Eigen::MatrixXd& a1, const Eigen::VectorXd& b1, const Eigen::MatrixXd& a2,
                  const Eigen::VectorXd& b2) {
  return Network(a1.cols(), {Layer::from_dense(a1, b1), Layer::from_dense(a2, b2)});
}

}  // namespace

Network identity(std::span<const double> radius) {
  const auto d = static_cast<Eigen::Index>(radius.size());
  if (d == 0) throw ValidationError("identity gadget needs d >= 1");
  for (double r : radius) check_radius(r);

  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(4 * d, d);
  Eigen::VectorXd b1(4 * d);
  Eigen::MatrixXd a2 = Eigen::MatrixXd::Zero(d, 4 * d);
  const double sign[4] = {1.0, -1.0, 1.0, -1.0};
  const double shift[4] = {2.0, 0.0, 0.0, 2.0};
  const double out[4] = {1.0, 1.0, -1.0, -1.0};
  for (Eigen::Index j = 0; j < d; ++j) {
    const double r = radius[static_cast<std::size_t>(j)];
    for (Eigen::Index block = 0; block < 4; ++block) {
      const Eigen::Index row = block * d + j;
      a1(row, j) = sign[block];
      b1[row] = r + shift[block];
      a2(j, row) = out[block] / (24.0 * (r + 1.0));
    }
  }
  return two_layer(a1, b1, a2, Eigen::VectorXd::Zero(d));
}

Network identity(Eigen::Index d, double radius) {
  return identity(std::vector<double>(static_cast<std::size_t>(d), radius));
}

Network square(double r) {
  check_radius(r);
  Eigen::MatrixXd a1(2, 1);
  a1 << -1.0, 1.0;
  Eigen::MatrixXd a2(1, 2);
  a2 << 1.0 / (6.0 * r), 1.0 / (6.0 * r);
  return two_layer(a1, Eigen::Vector2d(r, r), a2, Eigen::VectorXd::Constant(1, -r * r / 3.0));
}

Network product(double r) {
  check_radius(r);
  Eigen::MatrixXd a1(4, 2);
  a1 << -1.0, -1.0,
         1.0,  1.0,
        -1.0,  1.0,
         1.0, -1.0;
  Eigen::MatrixXd a2(1, 4);
  a2 << 1.0, 1.0, -1.0, -1.0;
  a2 /= 48.0 * r;
  return two_layer(a1, Eigen::VectorXd::Constant(4, 2.0 * r), a2, Eigen::VectorXd::Zero(1));
}

Network monomial_extractor() {
  Eigen::MatrixXd a1(3, 1);
  a1 << 1.0, -1.0, 1.0;
  Eigen::MatrixXd a2(1, 3);
  a2 << 1.0, -1.0, -2.0;
  a2 /= 6.0;
  return two_layer(a1, Eigen::Vector3d(1.0, 1.0, 0.0), a2, Eigen::VectorXd::Zero(1));
}

Network constant(Eigen::Index input_dim, double value) {
  // A single hidden neuron with zero weights keeps the depth at two.
  return two_layer(Eigen::MatrixXd::Zero(1, input_dim), Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1),
                   Eigen::VectorXd::Constant(1, value));
}

}  // namespace recu::gadgets

namespace recu {

Network build_gadget(const GadgetSpec& spec) {
  struct Visitor {
    Network operator()(const IdentitySpec& s) const { return gadgets::identity(s.radius); }
    Network operator()(const SquareSpec& s) const { return gadgets::square(s.radius); }
    Network operator()(const ProductSpec& s) const { return gadgets::product(s.radius); }
    Network operator()(const BumpSpec& s) const { return bump_network(s.variant); }
    Network operator()(const ExtractorSpec&) const { return gadgets::monomial_extractor(); }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace recu

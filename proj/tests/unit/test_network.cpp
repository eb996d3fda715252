#include <random>

#include "doctest.h"
#include "recu/gadgets.hpp"
#include "recu/network.hpp"
#include "recu/partition.hpp"
#include "support.hpp"

using namespace recu;
using recu::testing::random_network;
using recu::testing::random_points;

namespace {

Network scalar_affine(double a, double b) {
  return affine_network(Eigen::MatrixXd::Constant(1, 1, a), Eigen::VectorXd::Constant(1, b));
}

// x -> rho3(x) -> identity output.
Network rho_then_identity() {
  return Network(1, {Layer::from_dense(Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Zero(1)),
                     Layer::from_dense(Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::VectorXd::Zero(1))});
}

}  // namespace

TEST_CASE("activation values and kink convention") {
  CHECK(kReCU(2.0) == 8.0);
  CHECK(kReCU(-1.0) == 0.0);
  CHECK(kReCU.first_derivative(2.0) == 12.0);
  CHECK(kReCU.second_derivative(2.0) == 12.0);
  CHECK(kReCU.first_derivative(0.0) == 0.0);
  CHECK(kReCU.second_derivative(0.0) == 0.0);
  CHECK(Activation::from_name("rho3") == kReCU);
  CHECK_THROWS_AS(Activation::from_name("tanh"), ValidationError);
}

TEST_CASE("realize: affine last layer and rho3 inside") {
  CHECK(realize(scalar_affine(2.0, 1.0), {3.0})[0] == 7.0);
  CHECK(realize(rho_then_identity(), {2.0})[0] == 8.0);
  CHECK(realize(rho_then_identity(), {-1.0})[0] == 0.0);
  CHECK_THROWS_AS(realize(scalar_affine(1.0, 0.0), {1.0, 2.0}), ShapeError);
}

TEST_CASE("layer and network validation") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, NAN);
  CHECK_THROWS_AS(Layer::from_dense(a, Eigen::VectorXd::Zero(1)), ValidationError);
  CHECK_THROWS_AS(Layer::from_dense(Eigen::MatrixXd::Ones(2, 1), Eigen::VectorXd::Zero(1)), ShapeError);
  CHECK_THROWS_AS(Network(2, {Layer::from_dense(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1))}), ShapeError);
  CHECK_THROWS_AS(Network(1, {}), ShapeError);
}

TEST_CASE("realize_batch agrees with pointwise realize") {
  std::mt19937_64 rng(11);
  const Network net = random_network(rng, 3, 2, 4);
  const RowMatrix pts = random_points(rng, 3, 64);
  const RowMatrix out = realize_batch(net, pts);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    const std::vector<double> x{pts(0, c), pts(1, c), pts(2, c)};
    const auto y = realize(net, x);
    CHECK(out(0, c) == doctest::Approx(y[0]).epsilon(1e-14));
    CHECK(out(1, c) == doctest::Approx(y[1]).epsilon(1e-14));
  }
}

TEST_CASE("concatenation depth and weight bounds") {
  const Network f = gadgets::square(1.0);
  const Network g = gadgets::identity(1, 1.0);
  const SizeAccount sf = size_account(f);
  const SizeAccount sg = size_account(g);
  const SizeAccount sc = size_account(concatenate(f, g));
  CHECK(sc.depth == sf.depth + sg.depth - 1);
  CHECK(sc.weights <= sf.weights + sg.weights + sf.weights * sg.weights);
}

TEST_CASE("identity composed with identity is the identity on [-1, 1]") {
  const Network id = gadgets::identity(1, 1.0);
  const Network twice = concatenate(id, id);
  std::mt19937_64 rng(3);
  const RowMatrix x = random_points(rng, 1, 1000);
  const RowMatrix y = realize_batch(twice, x);
  CHECK((y - x).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("property: composition semantics on random networks") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> depth(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index in = dim(rng);
    const Eigen::Index mid = dim(rng);
    const Network g = random_network(rng, in, mid, depth(rng));
    const Network f = random_network(rng, mid, dim(rng), depth(rng));
    const RowMatrix x = random_points(rng, static_cast<int>(in), 1000);
    const RowMatrix lhs = realize_batch(concatenate(f, g), x);
    const RowMatrix rhs = realize_batch(f, realize_batch(g, x));
    CHECK(recu::testing::max_relative_gap(lhs, rhs) <= 1e-12);
    const SizeAccount sc = size_account(concatenate(f, g));
    CHECK(sc.depth == f.depth() + g.depth() - 1);
    CHECK(sc.weights <= size_account(f).weights + size_account(g).weights +
                            size_account(f).weights * size_account(g).weights);
    CHECK(sc.neurons <= size_account(f).neurons + size_account(g).neurons);
  }
}

TEST_CASE("concatenation rejects mismatched shapes") {
  CHECK_THROWS_AS(concatenate(gadgets::product(1.0), gadgets::product(1.0)), ShapeError);
  const Network relu(1, {Layer::from_dense(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1))}, Activation{1});
  CHECK_THROWS_AS(concatenate(relu, scalar_affine(1.0, 0.0)), ShapeError);
}

TEST_CASE("parallelization: duplication, shape and M additivity") {
  const Network f = gadgets::square(1.0);
  const Network p = parallelize(f, f);
  CHECK(p.output_dim() == 2);
  for (double x : {-0.8, -0.1, 0.0, 0.45, 1.0}) {
    const auto y = realize(p, {x});
    CHECK(y[0] == y[1]);
    CHECK(y[0] == doctest::Approx(x * x).epsilon(1e-13));
  }
  CHECK(size_account(p).weights == 2 * size_account(f).weights);
  CHECK_THROWS_AS(parallelize(f, concatenate(f, f)), ShapeError);
  CHECK_THROWS_AS(parallelize(f, gadgets::product(1.0)), ShapeError);
}

TEST_CASE("property: parallelization and block_diagonal semantics") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> depth(1, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const int L = depth(rng);
    const Eigen::Index in = dim(rng);
    const Network f = random_network(rng, in, dim(rng), L);
    const Network g = random_network(rng, in, dim(rng), L);
    const RowMatrix x = random_points(rng, static_cast<int>(in), 200);
    const RowMatrix both = realize_batch(parallelize(f, g), x);
    const RowMatrix fx = realize_batch(f, x);
    const RowMatrix gx = realize_batch(g, x);
    CHECK((both.topRows(fx.rows()) - fx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((both.bottomRows(gx.rows()) - gx).cwiseAbs().maxCoeff() == 0.0);
    CHECK(size_account(parallelize(f, g)).weights == size_account(f).weights + size_account(g).weights);

    const Eigen::Index in2 = dim(rng);
    const Network h = random_network(rng, in2, dim(rng), L);
    const Network blocks[] = {f, h};
    const Network bd = block_diagonal(blocks);
    const RowMatrix y = random_points(rng, static_cast<int>(in2), 200);
    RowMatrix xy(in + in2, 200);
    xy << x, y;
    const RowMatrix out = realize_batch(bd, xy);
    const RowMatrix hy = realize_batch(h, y);
    CHECK((out.topRows(fx.rows()) - fx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((out.bottomRows(hy.rows()) - hy).cwiseAbs().maxCoeff() == 0.0);
    CHECK(size_account(bd).weights == size_account(f).weights + size_account(h).weights);
  }
}

TEST_CASE("size accounting of the gadgets") {
  const SizeAccount bump = size_account(bump_network(BumpVariant::paper));
  CHECK(bump.weights == 24);
  CHECK(bump.neurons == 10);
  CHECK(bump.depth == 2);
  const SizeAccount prod = size_account(gadgets::product(2.0));
  CHECK(prod.weights == 16);
  CHECK(prod.neurons == 7);
  const SizeAccount sq = size_account(gadgets::square(2.0));
  CHECK(sq.weights == 7);
  CHECK(sq.neurons == 4);
}

TEST_CASE("architecture masks") {
  std::mt19937_64 rng(5);
  const Network net = random_network(rng, 2, 1, 3, 4, 0.5);
  const ArchitectureMask own = architecture_of(net);
  CHECK(matches_architecture(net, own));
  CHECK(matches_architecture(net, full_mask(net)));

  // One extra nonzero outside the pattern.
  std::vector<Layer> layers = net.layers();
  Eigen::MatrixXd a = layers[0].dense_weights();
  bool placed = false;
  for (Eigen::Index i = 0; i < a.rows() && !placed; ++i) {
    for (Eigen::Index j = 0; j < a.cols() && !placed; ++j) {
      if (a(i, j) == 0.0) {
        a(i, j) = 0.5;
        placed = true;
      }
    }
  }
  if (!placed) {
    Eigen::VectorXd b = layers[0].bias();
    for (Eigen::Index i = 0; i < b.size() && !placed; ++i) {
      if (b[i] == 0.0) {
        b[i] = 0.5;
        placed = true;
      }
    }
    layers[0] = Layer::from_dense(a, b);
  } else {
    layers[0] = Layer::from_dense(a, layers[0].bias());
  }
  if (placed) CHECK_FALSE(matches_architecture(Network(2, layers), own));

  // Shape mismatch never matches.
  CHECK_FALSE(matches_architecture(gadgets::square(1.0), architecture_of(gadgets::identity(1, 1.0))));
}

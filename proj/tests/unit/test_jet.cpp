#include <random>

#include "doctest.h"
#include "recu/gadgets.hpp"
#include "recu/jet.hpp"
#include "support.hpp"

using namespace recu;

TEST_CASE("jet of the exact product t x") {
  const double x[] = {0.5};
  const Jet2 j = eval_jet(gadgets::product(1.0), 0.3, x);
  CHECK(j.value == doctest::Approx(0.15).epsilon(1e-13));
  CHECK(j.d_t == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(j.d_x[0] == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(j.d_tx[0] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("jet of the square gadget, input t only") {
  const Jet2 j = eval_jet(gadgets::square(1.0), 0.5, {});
  CHECK(j.value == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(j.d_t == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(j.dims() == 0);
}

TEST_CASE("constant network has a zero derivative jet") {
  const double x[] = {0.7, 0.2};
  const Jet2 j = eval_jet(gadgets::constant(3, 4.0), 0.1, x);
  CHECK(j.value == doctest::Approx(4.0));
  CHECK(j.d_t == 0.0);
  CHECK(j.d_x.cwiseAbs().maxCoeff() == 0.0);
  CHECK(j.d_tx.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shape errors") {
  const double x[] = {0.1, 0.2};
  CHECK_THROWS_AS(eval_jet(gadgets::product(1.0), 0.3, x), ShapeError);
  const double one[] = {0.1};
  CHECK_THROWS_AS(eval_jet(gadgets::identity(2, 1.0), 0.3, one), ShapeError);
}

TEST_CASE("finite differences") {
  const double x[] = {0.5};
  CHECK(finite_difference_check(gadgets::product(1.0), 0.3, x, 1e-5) <= 1e-6);
  CHECK_THROWS_AS(finite_difference_check(gadgets::product(1.0), 0.3, x, 0.0), ValidationError);
  CHECK_THROWS_AS(finite_difference_check(gadgets::product(1.0), 0.3, x, -1e-3), ValidationError);

  // Deep random network, interior point.
  std::mt19937_64 rng(10);
  const Network deep = recu::testing::random_network(rng, 3, 1, 10, 6, 0.8, 0.6);
  const double y[] = {0.21, -0.34};
  CHECK(finite_difference_check(deep, 0.13, y, 1e-5) <= 1e-4);
}

TEST_CASE("property: jets match finite differences on random smooth networks") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coord(-0.9, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    // Positive biases and small weights keep every unit away from its kink.
    const int d = 1 + trial % 2;
    const Network net = recu::testing::random_network(rng, d + 1, 1, 2 + trial % 3, 4, 1.0, 0.4);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (auto& v : x) v = coord(rng);
    CHECK(finite_difference_check(net, coord(rng), x, 1e-5) <= 1e-4);
  }
}

TEST_CASE("batched jets equal pointwise jets for several outputs") {
  std::mt19937_64 rng(99);
  const Network net = recu::testing::random_network(rng, 3, 2, 3);
  const RowMatrix pts = recu::testing::random_points(rng, 3, 17);
  const JetBatch batch = eval_jet_batch(net, pts);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    const double x[] = {pts(1, c), pts(2, c)};
    const auto jets = eval_jets(net, pts(0, c), x);
    for (Eigen::Index o = 0; o < 2; ++o) {
      const Jet2 b = batch.at(o, c);
      const Jet2& p = jets[static_cast<std::size_t>(o)];
      CHECK(b.value == doctest::Approx(p.value).epsilon(1e-13));
      CHECK(b.d_t == doctest::Approx(p.d_t).epsilon(1e-13));
      CHECK(b.d_x[1] == doctest::Approx(p.d_x[1]).epsilon(1e-13));
      CHECK(b.d_tx[0] == doctest::Approx(p.d_tx[0]).epsilon(1e-13));
    }
  }
}

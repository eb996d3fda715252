#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "recu/multi_index.hpp"
#include "recu/quadrature.hpp"

using namespace recu;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 16, 64}) {
    const QuadratureRule q = gauss_legendre(n, 0.0, 2.0);
    CHECK(q.size() == static_cast<std::size_t>(n));
    CHECK(std::is_sorted(q.nodes.begin(), q.nodes.end()));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], deg);
      CHECK(s == doctest::Approx(std::pow(2.0, deg + 1) / (deg + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("known Gauss-Legendre nodes") {
  const QuadratureRule q = gauss_legendre(2);
  CHECK(q.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(q.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  const QuadratureRule q3 = gauss_legendre(3);
  CHECK(q3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(q3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("uniform rules") {
  const QuadratureRule mid = uniform_midpoint(4, 0.0, 1.0);
  CHECK(mid.nodes[0] == doctest::Approx(0.125));
  CHECK(mid.weights[3] == doctest::Approx(0.25));
  const QuadratureRule closed = uniform_closed(5, 0.0, 1.0);
  CHECK(closed.nodes.front() == 0.0);
  CHECK(closed.nodes.back() == 1.0);
  double total = 0.0;
  for (double w : closed.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  double s = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) s += closed.weights[i] * std::sin(std::numbers::pi * closed.nodes[i]);
  CHECK(s == doctest::Approx(2.0 / std::numbers::pi).epsilon(0.06));
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1 << 20, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{1.0, 2.0, 3.0}) == 6.0);
}

TEST_CASE("multi-index helpers") {
  CHECK(box_indices(2, 2).size() == 9u);
  CHECK(box_indices(3, 1).front() == MultiIndex{0, 0, 0});
  CHECK(box_indices(2, 3)[box_position({2, 1}, 3)] == MultiIndex{2, 1});
  CHECK(graded_indices(2, 2).size() == 6u);
  CHECK(graded_indices(3, 3).size() == 20u);
  CHECK(indices_of_degree(3, 2).size() == 6u);
  CHECK(factorial(5) == 120.0);
  CHECK(binomial(6, 2) == 15.0);
  CHECK(binomial(3, 5) == 0.0);
  CHECK(multi_factorial({2, 3}) == 12.0);
  CHECK(multi_binomial({3, 2}, {1, 1}) == 6.0);
  CHECK(dominates({2, 1}, {1, 1}));
  CHECK_FALSE(dominates({2, 1}, {0, 2}));
  CHECK(integer_power(-2.0, 3) == -8.0);
  CHECK(integer_power(0.0, 0) == 1.0);
  for (const auto& a : graded_indices(3, 4)) CHECK(total_degree(a) <= 4);
}

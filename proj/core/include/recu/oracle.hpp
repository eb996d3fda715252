#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "recu/jet.hpp"
#include "recu/multi_index.hpp"

namespace recu {

/// Axis-aligned box over (t, x_1, ..., x_d).
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box cube(int dims, double lo, double hi);
  int dims() const noexcept { return static_cast<int>(lower.size()); }
  bool contains(std::span<const double> point, double slack = 0.0) const;
  bool contains(const Box& inner, double slack = 0.0) const;
};

/// A target u with all mixed partials D_t^kappa D_x^alpha up to `order` in
/// each variable. Derivative multi-indices put kappa in entry 0.
class JetOracle {
 public:
  using Evaluator = std::function<double(const MultiIndex& deriv, double t, std::span<const double> x)>;

  JetOracle(std::string name, int d, int order, Box domain, Evaluator evaluator);

  const std::string& name() const noexcept { return name_; }
  int d() const noexcept { return d_; }
  int order() const noexcept { return order_; }
  const Box& domain() const noexcept { return domain_; }

  /// Throws ValidationError when an entry of deriv exceeds order().
  double derivative(const MultiIndex& deriv, double t, std::span<const double> x) const;
  double value(double t, std::span<const double> x) const;
  Jet2 jet(double t, std::span<const double> x) const;

 private:
  std::string name_;
  int d_;
  int order_;
  Box domain_;
  Evaluator evaluator_;
};

/// One-dimensional factor with closed-form derivatives of every order.
struct Factor1D {
  enum class Kind { sine, exponential, power, truncated_power };
  Kind kind = Kind::power;
  double a = 1.0;  // frequency, rate or (for truncated_power) the knot
  double b = 0.0;  // phase
  int s = 0;       // exponent for power kinds

  double derivative(int order, double z) const;
  /// Largest order with a bounded derivative; unbounded for smooth kinds.
  int smoothness() const noexcept;

  static Factor1D sine(double freq, double phase = 0.0) { return {Kind::sine, freq, phase, 0}; }
  static Factor1D exponential(double rate) { return {Kind::exponential, rate, 0.0, 0}; }
  static Factor1D power(int s) { return {Kind::power, 0.0, 0.0, s}; }
  static Factor1D truncated_power(double knot, int s) { return {Kind::truncated_power, knot, 0.0, s}; }
};

/// coefficient * prod_l factors[l](z_l), with z_0 = t.
struct SeparableTerm {
  double coefficient = 1.0;
  std::vector<Factor1D> factors;
};

JetOracle separable_oracle(std::string name, int d, std::vector<SeparableTerm> terms, double pad = 1.0);

/// Polynomial sum_i c_i t^e_i0 x^e_i. Exponents use the time-first convention.
JetOracle polynomial_oracle(std::string name, int d, const std::vector<std::pair<double, MultiIndex>>& terms,
                            double pad = 1.0);

/// a u + b v on the intersection of the domains.
JetOracle linear_combination(double a, const JetOracle& u, double b, const JetOracle& v);

/// Names accepted by make_target.
std::vector<std::string> target_names();

/// Bundled targets on [-1, 2]^{1+d}:
///   sin_sin      sin(pi t) prod sin(pi x_j)
///   sin_cos      sin(2 pi t) prod cos(2 pi x_j)
///   wave         sin(pi t + 0.3) prod cos(1.5 pi x_j + 0.2)
///   exp          exp(0.5 t) prod exp(0.7 x_j)
///   poly_linear  t + sum x_j
///   poly_tx2     t x_1^2
///   const        1
///   zero         0
///   spline       prod (z_l - 0.37)_+^5 over all coordinates, C^4 but not C^5
/// Throws ValidationError for an unknown name.
JetOracle make_target(const std::string& name, int d);

}  // namespace recu

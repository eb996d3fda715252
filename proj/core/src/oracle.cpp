#include "recu/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "recu/errors.hpp"

namespace recu {

Box Box::cube(int dims, double lo, double hi) {
  return Box{std::vector<double>(static_cast<std::size_t>(dims), lo), std::vector<double>(static_cast<std::size_t>(dims), hi)};
}

bool Box::contains(std::span<const double> point, double slack) const {
  if (point.size() != lower.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] < lower[i] - slack || point[i] > upper[i] + slack) return false;
  }
  return true;
}

bool Box::contains(const Box& inner, double slack) const {
  return contains(inner.lower, slack) && contains(inner.upper, slack);
}

JetOracle::JetOracle(std::string name, int d, int order, Box domain, Evaluator evaluator)
    : name_(std::move(name)), d_(d), order_(order), domain_(std::move(domain)), evaluator_(std::move(evaluator)) {
  if (d < 1) throw ValidationError("oracle needs d >= 1");
  if (domain_.dims() != d + 1) throw ShapeError("oracle domain must have d+1 axes");
}

double JetOracle::derivative(const MultiIndex& deriv, double t, std::span<const double> x) const {
  if (static_cast<int>(deriv.size()) != d_ + 1) throw ShapeError("derivative index must have d+1 entries");
  for (int v : deriv) {
    if (v < 0 || v > order_) throw ValidationError("oracle '" + name_ + "' provides derivatives up to order " + std::to_string(order_));
  }
  if (static_cast<int>(x.size()) != d_) throw ShapeError("oracle evaluated at a point of wrong dimension");
  return evaluator_(deriv, t, x);
}

double JetOracle::value(double t, std::span<const double> x) const {
  return derivative(MultiIndex(static_cast<std::size_t>(d_ + 1), 0), t, x);
}

Jet2 JetOracle::jet(double t, std::span<const double> x) const {
  Jet2 j(d_);
  MultiIndex deriv(static_cast<std::size_t>(d_ + 1), 0);
  j.value = derivative(deriv, t, x);
  deriv[0] = 1;
  j.d_t = derivative(deriv, t, x);
  for (int i = 0; i < d_; ++i) {
    const auto s = static_cast<std::size_t>(i + 1);
    deriv[0] = 0;
    deriv[s] = 1;
    j.d_x[i] = derivative(deriv, t, x);
    deriv[0] = 1;
    j.d_tx[i] = derivative(deriv, t, x);
    deriv[s] = 0;
  }
  return j;
}

double Factor1D::derivative(int order, double z) const {
  switch (kind) {
    case Kind::sine:
      return integer_power(a, order) * std::sin(a * z + b + order * std::numbers::pi / 2.0);
    case Kind::exponential:
      return integer_power(a, order) * std::exp(a * z);
    case Kind::power: {
      if (order > s) return 0.0;
      double c = 1.0;
      for (int i = 0; i < order; ++i) c *= s - i;
      return c * integer_power(z, s - order);
    }
    case Kind::truncated_power: {
      if (order > s || z <= a) return 0.0;
      double c = 1.0;
      for (int i = 0; i < order; ++i) c *= s - i;
      return c * integer_power(z - a, s - order);
    }
  }
  return 0.0;
}

int Factor1D::smoothness() const noexcept {
  return kind == Kind::truncated_power ? s : 64;
}

JetOracle separable_oracle(std::string name, int d, std::vector<SeparableTerm> terms, double pad) {
  int order = 64;
  for (const auto& term : terms) {
    if (static_cast<int>(term.factors.size()) != d + 1) throw ShapeError("separable term needs d+1 factors");
    for (const auto& f : term.factors) order = std::min(order, f.smoothness());
  }
  auto eval = [terms = std::move(terms)](const MultiIndex& deriv, double t, std::span<const double> x) {
    double acc = 0.0;
    for (const auto& term : terms) {
      double v = term.coefficient;
      for (std::size_t l = 0; l < term.factors.size() && v != 0.0; ++l) {
        v *= term.factors[l].derivative(deriv[l], l == 0 ? t : x[l - 1]);
      }
      acc += v;
    }
    return acc;
  };
  return JetOracle(std::move(name), d, order, Box::cube(d + 1, -pad, 1.0 + pad), std::move(eval));
}

JetOracle polynomial_oracle(std::string name, int d, const std::vector<std::pair<double, MultiIndex>>& terms, double pad) {
  std::vector<SeparableTerm> sep;
  for (const auto& [c, e] : terms) {
    if (static_cast<int>(e.size()) != d + 1) throw ShapeError("monomial exponent needs d+1 entries");
    SeparableTerm term{c, {}};
    for (int s : e) term.factors.push_back(Factor1D::power(s));
    sep.push_back(std::move(term));
  }
  return separable_oracle(std::move(name), d, std::move(sep), pad);
}

JetOracle linear_combination(double a, const JetOracle& u, double b, const JetOracle& v) {
  if (u.d() != v.d()) throw ShapeError("cannot combine oracles of different dimension");
  Box dom = u.domain();
  for (int i = 0; i < dom.dims(); ++i) {
    const auto s = static_cast<std::size_t>(i);
    dom.lower[s] = std::max(dom.lower[s], v.domain().lower[s]);
    dom.upper[s] = std::min(dom.upper[s], v.domain().upper[s]);
  }
  auto eval = [a, u, b, v](const MultiIndex& deriv, double t, std::span<const double> x) {
    return a * u.derivative(deriv, t, x) + b * v.derivative(deriv, t, x);
  };
  return JetOracle(u.name() + "+" + v.name(), u.d(), std::min(u.order(), v.order()), std::move(dom), std::move(eval));
}

std::vector<std::string> target_names() {
  return {"sin_sin", "sin_cos", "wave", "exp", "poly_linear", "poly_tx2", "const", "zero", "spline"};
}

JetOracle make_target(const std::string& name, int d) {
  if (d < 1) throw ValidationError("targets need d >= 1");
  const double pi = std::numbers::pi;
  const auto n = static_cast<std::size_t>(d + 1);
  auto all = [n](Factor1D first, Factor1D rest) {
    SeparableTerm term{1.0, {first}};
    for (std::size_t l = 1; l < n; ++l) term.factors.push_back(rest);
    return term;
  };
  auto unit = [n](double c) { return SeparableTerm{c, std::vector<Factor1D>(n, Factor1D::power(0))}; };

  if (name == "sin_sin") return separable_oracle(name, d, {all(Factor1D::sine(pi), Factor1D::sine(pi))});
  if (name == "sin_cos") {
    return separable_oracle(name, d, {all(Factor1D::sine(2 * pi), Factor1D::sine(2 * pi, pi / 2))});
  }
  if (name == "wave") {
    return separable_oracle(name, d, {all(Factor1D::sine(pi, 0.3), Factor1D::sine(1.5 * pi, 0.2 + pi / 2))});
  }
  if (name == "exp") return separable_oracle(name, d, {all(Factor1D::exponential(0.5), Factor1D::exponential(0.7))});
  if (name == "poly_linear") {
    std::vector<std::pair<double, MultiIndex>> terms;
    for (std::size_t l = 0; l < n; ++l) {
      MultiIndex e(n, 0);
      e[l] = 1;
      terms.emplace_back(1.0, e);
    }
    return polynomial_oracle(name, d, terms);
  }
  if (name == "poly_tx2") {
    MultiIndex e(n, 0);
    e[0] = 1;
    e[1] = 2;
    return polynomial_oracle(name, d, {{1.0, e}});
  }
  if (name == "const") return separable_oracle(name, d, {unit(1.0)});
  if (name == "zero") return separable_oracle(name, d, {unit(0.0)});
  if (name == "spline") {
    return separable_oracle(name, d, {all(Factor1D::truncated_power(0.37, 5), Factor1D::truncated_power(0.37, 5))});
  }
  throw ValidationError("unknown target '" + name + "'");
}

}  // namespace recu

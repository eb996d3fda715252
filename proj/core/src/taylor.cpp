#include "recu/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "recu/parallel.hpp"
#include "recu/quadrature.hpp"

namespace recu {

namespace {

BallQuadrature build_reference(int dims, BallMetric metric, int nodes) {
  const CutoffSpec unit{std::vector<double>(static_cast<std::size_t>(dims), 0.0), 1.0, metric};
  const QuadratureRule axis = gauss_legendre(nodes, -1.0, 1.0);
  std::size_t total = 1;
  for (int l = 0; l < dims; ++l) total *= axis.size();

  std::vector<double> kept_nodes;
  BallQuadrature q;
  std::vector<double> point(static_cast<std::size_t>(dims));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    double w = 1.0;
    for (int l = dims - 1; l >= 0; --l) {
      const std::size_t a = rest % axis.size();
      rest /= axis.size();
      point[static_cast<std::size_t>(l)] = axis.nodes[a];
      w *= axis.weights[a];
    }
    const double phi = unit(point);
    if (phi <= 0.0) continue;
    kept_nodes.insert(kept_nodes.end(), point.begin(), point.end());
    q.weights.push_back(w);
    q.phi.push_back(phi);
  }
  std::vector<double> masses(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) masses[i] = q.weights[i] * q.phi[i];
  const double integral = pairwise_sum(masses);
  for (double& v : q.phi) v /= integral;

  q.nodes.resize(dims, static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (int l = 0; l < dims; ++l) {
      q.nodes(l, static_cast<Eigen::Index>(i)) = kept_nodes[i * static_cast<std::size_t>(dims) + static_cast<std::size_t>(l)];
    }
  }
  return q;
}

const BallQuadrature& reference_quadrature(int dims, BallMetric metric, int nodes) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<BallQuadrature>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dims, static_cast<int>(metric), nodes}];
  if (!slot) slot = std::make_unique<BallQuadrature>(build_reference(dims, metric, nodes));
  return *slot;
}

double falling(int e, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= e - i;
  return c;
}

}  // namespace

double CutoffSpec::operator()(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dims()) throw ShapeError("cut-off evaluated at a point of wrong dimension");
  if (metric == BallMetric::euclidean) {
    double rho2 = 0.0;
    for (std::size_t l = 0; l < point.size(); ++l) {
      const double z = (point[l] - center[l]) / radius;
      rho2 += z * z;
    }
    return rho2 >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - rho2));
  }
  const double a = std::abs(point[0] - center[0]) / radius;
  double b2 = 0.0;
  for (std::size_t l = 1; l < point.size(); ++l) {
    const double z = (point[l] - center[l]) / radius;
    b2 += z * z;
  }
  const double b = std::sqrt(b2);
  if (a + b >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - a * a) - 1.0 / (1.0 - b2));
}

Box CutoffSpec::bounding_box() const {
  Box box{center, center};
  for (std::size_t l = 0; l < center.size(); ++l) {
    box.lower[l] -= radius;
    box.upper[l] += radius;
  }
  return box;
}

void validate(const CutoffSpec& ball) {
  if (ball.dims() < 2) throw ValidationError("balls live in (t, x) with d >= 1");
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius)) throw ValidationError("ball radius must be positive");
  for (double c : ball.center) {
    if (!std::isfinite(c)) throw ValidationError("ball center must be finite");
  }
}

BallQuadrature ball_quadrature(const CutoffSpec& ball, int nodes_per_axis) {
  validate(ball);
  if (nodes_per_axis < 2) throw ValidationError("ball quadrature needs at least two nodes per axis");
  BallQuadrature q = reference_quadrature(ball.dims(), ball.metric, nodes_per_axis);
  const double volume = std::pow(ball.radius, ball.dims());
  for (Eigen::Index i = 0; i < q.nodes.cols(); ++i) {
    for (int l = 0; l < ball.dims(); ++l) {
      q.nodes(l, i) = ball.center[static_cast<std::size_t>(l)] + ball.radius * q.nodes(l, i);
    }
  }
  for (double& w : q.weights) w *= volume;
  for (double& v : q.phi) v /= volume;
  return q;
}

LocalPolynomial::LocalPolynomial(int d, int order)
    : d_(d), order_(order), exponents_(graded_indices(d + 1, order - 1)), coefficients_(exponents_.size(), 0.0) {
  if (d < 1) throw ValidationError("polynomials need d >= 1");
  if (order < 1) throw ValidationError("Taylor order must be at least 1");
}

std::size_t LocalPolynomial::position(const MultiIndex& exponent) const {
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] == exponent) return i;
  }
  throw ValidationError("exponent outside the polynomial basis");
}

double LocalPolynomial::coefficient(const MultiIndex& exponent) const { return coefficients_[position(exponent)]; }

double LocalPolynomial::operator()(double t, std::span<const double> x) const {
  return derivative(MultiIndex(static_cast<std::size_t>(d_ + 1), 0), t, x);
}

double LocalPolynomial::derivative(const MultiIndex& deriv, double t, std::span<const double> x) const {
  if (static_cast<int>(deriv.size()) != d_ + 1 || static_cast<int>(x.size()) != d_) {
    throw ShapeError("polynomial evaluated with wrong dimensions");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const double c = coefficients_[i];
    if (c == 0.0) continue;
    const MultiIndex& e = exponents_[i];
    double term = c;
    for (int l = 0; l <= d_ && term != 0.0; ++l) {
      const auto s = static_cast<std::size_t>(l);
      if (deriv[s] > e[s]) {
        term = 0.0;
        break;
      }
      term *= falling(e[s], deriv[s]) * integer_power(l == 0 ? t : x[s - 1], e[s] - deriv[s]);
    }
    acc += term;
  }
  return acc;
}

Jet2 LocalPolynomial::jet(double t, std::span<const double> x) const {
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

LocalPolynomial averaged_taylor(const JetOracle& u, int m, const CutoffSpec& ball, const BallQuadrature& quad) {
  validate(ball);
  if (m < 1) throw ValidationError("Taylor order must be at least 1");
  if (ball.dims() != u.d() + 1) throw ShapeError("ball dimension does not match the oracle");
  if (u.order() < m - 1) {
    throw ValidationError("oracle '" + u.name() + "' has derivatives up to order " + std::to_string(u.order()) +
                          ", Taylor order " + std::to_string(m) + " needs " + std::to_string(m - 1));
  }
  if (!u.domain().contains(ball.bounding_box(), 1e-12)) {
    throw ValidationError("ball exceeds the domain of oracle '" + u.name() + "'");
  }
  if (quad.nodes.rows() != ball.dims()) throw ShapeError("quadrature dimension does not match the ball");

  LocalPolynomial poly(u.d(), m);
  const auto& basis = poly.exponents();
  const int dims = ball.dims();

  // (beta, gamma) pairs with gamma <= beta and the constant factor C(beta,gamma)/beta!.
  struct Pair {
    std::size_t beta;
    std::size_t gamma;
    double factor;
  };
  std::vector<Pair> pairs;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    for (std::size_t g = 0; g < basis.size(); ++g) {
      if (dominates(basis[b], basis[g])) {
        pairs.push_back({b, g, multi_binomial(basis[b], basis[g]) / multi_factorial(basis[b])});
      }
    }
  }

  std::vector<double> derivs(basis.size());
  std::vector<double> powers(static_cast<std::size_t>(dims * m));  // powers[l*m + e] = (-z_l)^e
  std::vector<double> x(static_cast<std::size_t>(u.d()));
  auto& coef = poly.coefficients();
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double mass = quad.mass(i);
    const auto col = static_cast<Eigen::Index>(i);
    const double t = quad.nodes(0, col);
    for (int j = 0; j < u.d(); ++j) x[static_cast<std::size_t>(j)] = quad.nodes(j + 1, col);
    for (std::size_t b = 0; b < basis.size(); ++b) derivs[b] = u.derivative(basis[b], t, x);
    for (int l = 0; l < dims; ++l) {
      const double z = -quad.nodes(l, col);
      double pw = 1.0;
      for (int e = 0; e < m; ++e) {
        powers[static_cast<std::size_t>(l * m + e)] = pw;
        pw *= z;
      }
    }
    for (const Pair& pr : pairs) {
      const MultiIndex& beta = basis[pr.beta];
      const MultiIndex& gamma = basis[pr.gamma];
      double term = mass * pr.factor * derivs[pr.beta];
      for (int l = 0; l < dims; ++l) {
        const auto s = static_cast<std::size_t>(l);
        term *= powers[static_cast<std::size_t>(l * m + beta[s] - gamma[s])];
      }
      coef[pr.gamma] += term;
    }
  }
  return poly;
}

LocalPolynomial averaged_taylor(const JetOracle& u, int m, const CutoffSpec& ball) {
  return averaged_taylor(u, m, ball, ball_quadrature(ball));
}

CoefficientBound coefficient_bound_check(const JetOracle& u, int m, const CutoffSpec& ball, const Box& domain, double R,
                                         const Exponent& p, const GridSpec& grid, double c_hat) {
  validate(ball);
  if (R < 1.0) throw ValidationError("R must be at least 1");
  if (!Box::cube(ball.dims(), -R, R).contains(ball.bounding_box(), 1e-12)) {
    throw ValidationError("ball is not inside the sup-norm ball of radius R");
  }
  const LocalPolynomial poly = averaged_taylor(u, m, ball);
  CoefficientBound out;
  const NormSpec spec{m - 1, p, m - 1, p, NormMode::norm};
  out.norm = norm_of_oracle(u, spec, grid, domain);
  for (double c : poly.coefficients()) out.largest = std::max(out.largest, std::abs(c));
  const double scale = p.is_infinite() ? 1.0 : std::pow(ball.radius, -(ball.dims()) / p.value);
  const double reference = scale * out.norm;
  out.bound = c_hat * reference;
  out.ratio = reference > 0.0 ? out.largest / reference : (out.largest > 0.0 ? INFINITY : 0.0);
  out.passed = out.largest <= out.bound || out.largest == 0.0;
  return out;
}

const LocalPolynomial& LocalPolynomials::at(const MultiIndex& mu) const { return polys.at(box_position(mu, N)); }

CutoffSpec cell_ball(int d, int N, const MultiIndex& mu) {
  if (static_cast<int>(mu.size()) != d + 1) throw ShapeError("cell index must have d+1 entries");
  CutoffSpec ball;
  for (int v : mu) ball.center.push_back(static_cast<double>(v) / N);
  ball.radius = 3.0 / (4.0 * N);
  ball.metric = BallMetric::euclidean;
  return ball;
}

LocalPolynomials local_polynomials(const JetOracle& u, int m, int N, int d, int nodes_per_axis) {
  if (N < 1) throw ValidationError("N must be at least 1");
  if (d != u.d()) throw ShapeError("oracle dimension does not match d");
  const double pad = 3.0 / (4.0 * N);
  if (!u.domain().contains(Box::cube(d + 1, -pad, 1.0 + pad), 1e-12)) {
    throw ValidationError("oracle '" + u.name() + "' is not padded by 3/(4N) around the unit box");
  }
  LocalPolynomials out;
  out.d = d;
  out.m = m;
  out.N = N;
  out.cells = box_indices(d + 1, N);
  const BallQuadrature& ref = reference_quadrature(d + 1, BallMetric::euclidean, nodes_per_axis);
  (void)ref;
  std::vector<std::unique_ptr<LocalPolynomial>> slots(out.cells.size());
  parallel_for(out.cells.size(), [&](std::size_t i) {
    const CutoffSpec ball = cell_ball(d, N, out.cells[i]);
    slots[i] = std::make_unique<LocalPolynomial>(averaged_taylor(u, m, ball, ball_quadrature(ball, nodes_per_axis)));
  });
  out.polys.reserve(slots.size());
  for (auto& s : slots) out.polys.push_back(std::move(*s));
  return out;
}

LocalizedApproximant::LocalizedApproximant(PartitionSpec partition, LocalPolynomials polys)
    : partition_(partition), polys_(std::move(polys)) {
  validate(partition_);
  if (polys_.N != partition_.N || polys_.d != partition_.d) throw ShapeError("polynomials do not match the partition");
}

template <typename F>
void LocalizedApproximant::for_each_active_cell(double t, std::span<const double> x, F&& f) const {
  const int dims = partition_.dims();
  const int N = partition_.N;
  const double scale = 3.0 * N;
  const double support = psi_support(partition_.variant);
  // Per axis, the grid indices whose factor is nonzero at the point.
  struct Active {
    int j;
    double value;
    double slope;
  };
  std::vector<std::vector<Active>> axes(static_cast<std::size_t>(dims));
  for (int l = 0; l < dims; ++l) {
    const double z = l == 0 ? t : x[static_cast<std::size_t>(l - 1)];
    const int base = static_cast<int>(std::floor(z * N));
    for (int j = std::max(0, base - 1); j <= std::min(N, base + 2); ++j) {
      const double y = scale * z - 3.0 * j;
      if (std::abs(y) >= support) continue;
      axes[static_cast<std::size_t>(l)].push_back({j, psi(partition_.variant, y), scale * psi_derivative(partition_.variant, y)});
    }
    if (axes[static_cast<std::size_t>(l)].empty()) return;
  }
  std::vector<std::size_t> pick(static_cast<std::size_t>(dims), 0);
  MultiIndex mu(static_cast<std::size_t>(dims));
  const auto d = static_cast<Eigen::Index>(partition_.d);
  while (true) {
    Jet2 phi(d);
    phi.value = 1.0;
    for (int l = 0; l < dims; ++l) {
      const Active& a = axes[static_cast<std::size_t>(l)][pick[static_cast<std::size_t>(l)]];
      mu[static_cast<std::size_t>(l)] = a.j;
      Jet2 factor(d);
      factor.value = a.value;
      if (l == 0) {
        factor.d_t = a.slope;
      } else {
        factor.d_x[l - 1] = a.slope;
      }
      phi = product_jet(phi, factor);
    }
    f(mu, phi);
    int l = dims - 1;
    while (l >= 0 && ++pick[static_cast<std::size_t>(l)] == axes[static_cast<std::size_t>(l)].size()) {
      pick[static_cast<std::size_t>(l)] = 0;
      --l;
    }
    if (l < 0) break;
  }
}

double LocalizedApproximant::operator()(double t, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != partition_.d) throw ShapeError("point dimension does not match the approximant");
  double acc = 0.0;
  for_each_active_cell(t, x, [&](const MultiIndex& mu, const Jet2& phi) { acc += phi.value * polys_.at(mu)(t, x); });
  return acc;
}

Jet2 LocalizedApproximant::jet(double t, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != partition_.d) throw ShapeError("point dimension does not match the approximant");
  Jet2 acc(partition_.d);
  for_each_active_cell(t, x, [&](const MultiIndex& mu, const Jet2& phi) {
    const Jet2 term = product_jet(phi, polys_.at(mu).jet(t, x));
    acc.value += term.value;
    acc.d_t += term.d_t;
    acc.d_x += term.d_x;
    acc.d_tx += term.d_tx;
  });
  return acc;
}

ChannelSampler LocalizedApproximant::sampler() const {
  return [self = *this](const RowMatrix& points, const std::vector<MultiIndex>& channels) {
    const int d = self.partition_.d;
    if (points.rows() != d + 1) throw ShapeError("points do not match the approximant dimension");
    bool values_only = true;
    for (const auto& c : channels) {
      if (c[0] > 1 || total_degree(c) - c[0] > 1) throw ValidationError("u_N jets provide kappa <= 1 and |alpha| <= 1 only");
      if (total_degree(c) > 0) values_only = false;
    }
    RowMatrix out(static_cast<Eigen::Index>(channels.size()), points.cols());
    std::vector<double> x(static_cast<std::size_t>(d));
    for (Eigen::Index p = 0; p < points.cols(); ++p) {
      for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = points(j + 1, p);
      if (values_only) {
        const double v = self(points(0, p), x);
        for (Eigen::Index c = 0; c < out.rows(); ++c) out(c, p) = v;
        continue;
      }
      const Jet2 jet = self.jet(points(0, p), x);
      for (std::size_t c = 0; c < channels.size(); ++c) {
        const MultiIndex& ch = channels[c];
        int axis = -1;
        for (std::size_t j = 1; j < ch.size(); ++j) {
          if (ch[j] == 1) axis = static_cast<int>(j) - 1;
        }
        double v = 0.0;
        if (axis < 0) {
          v = ch[0] == 0 ? jet.value : jet.d_t;
        } else {
          v = ch[0] == 0 ? jet.d_x[axis] : jet.d_tx[axis];
        }
        out(static_cast<Eigen::Index>(c), p) = v;
      }
    }
    return out;
  };
}

LocalizedApproximant u_N_approximant(const JetOracle& u, int m, int N, int d, BumpVariant variant, int nodes_per_axis) {
  return LocalizedApproximant(PartitionSpec{d, N, variant}, local_polynomials(u, m, N, d, nodes_per_axis));
}

double chunkiness(const Box& box) {
  if (box.dims() < 1 || box.lower.size() != box.upper.size()) throw ValidationError("degenerate box");
  double diam2 = 0.0;
  double shortest = INFINITY;
  for (int l = 0; l < box.dims(); ++l) {
    const double side = box.upper[static_cast<std::size_t>(l)] - box.lower[static_cast<std::size_t>(l)];
    if (!(side > 0.0) || !std::isfinite(side)) throw ValidationError("degenerate box");
    diam2 += side * side;
    shortest = std::min(shortest, side);
  }
  return std::sqrt(diam2) / (shortest / 2.0);
}

std::function<double(double, std::span<const double>)> remainder(const JetOracle& u, const LocalPolynomial& q) {
  if (u.d() != q.d()) throw ShapeError("remainder of mismatched dimensions");
  return [u, q](double t, std::span<const double> x) { return u.value(t, x) - q(t, x); };
}

JetOracle remainder_oracle(const JetOracle& u, const LocalPolynomial& q) {
  if (u.d() != q.d()) throw ShapeError("remainder of mismatched dimensions");
  auto eval = [u, q](const MultiIndex& deriv, double t, std::span<const double> x) {
    return u.derivative(deriv, t, x) - q.derivative(deriv, t, x);
  };
  return JetOracle("remainder(" + u.name() + ")", u.d(), u.order(), u.domain(), std::move(eval));
}

std::vector<ShrinkageRow> bramble_hilbert_sweep(const JetOracle& u, int m, const NormSpec& spec,
                                                std::span<const double> center, std::span<const double> half_widths,
                                                const GridSpec& grid, int nodes_per_axis) {
  if (static_cast<int>(center.size()) != u.d() + 1) throw ShapeError("center must have d+1 entries");
  std::vector<ShrinkageRow> rows;
  NormSpec semi = spec;
  semi.mode = NormMode::seminorm;
  for (double h : half_widths) {
    if (!(h > 0.0)) throw ValidationError("half widths must be positive");
    Box box{std::vector<double>(center.begin(), center.end()), std::vector<double>(center.begin(), center.end())};
    for (auto& v : box.lower) v -= h;
    for (auto& v : box.upper) v += h;
    const CutoffSpec ball{std::vector<double>(center.begin(), center.end()), 0.75 * h, BallMetric::euclidean};
    const LocalPolynomial q = averaged_taylor(u, m, ball, ball_quadrature(ball, nodes_per_axis));
    const double value = norm_of_oracle(remainder_oracle(u, q), semi, grid, box);
    rows.push_back({2.0 * h * std::sqrt(static_cast<double>(center.size())), value});
  }
  return rows;
}

}  // namespace recu

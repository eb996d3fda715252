#include "recu/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recu/jet.hpp"
#include "recu/parallel.hpp"

namespace recu {

namespace {

constexpr std::size_t kSampleChunk = 4096;

double power_sum_root(std::vector<double>& terms, const Exponent& p) {
  if (terms.empty()) return 0.0;
  if (p.is_infinite()) return *std::max_element(terms.begin(), terms.end());
  for (double& v : terms) v = std::pow(v, p.value);
  return std::pow(pairwise_sum(terms), 1.0 / p.value);
}

// Weighted L^p (or max) of |values| with the given weights.
double lp(std::span<const double> values, std::span<const double> weights, const Exponent& p) {
  if (p.is_infinite()) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = weights[i] * std::pow(std::abs(values[i]), p.value);
  return std::pow(pairwise_sum(terms), 1.0 / p.value);
}

QuadratureRule axis_rule(const Exponent& e, int nodes, GridRule rule, double a, double b) {
  if (e.is_infinite()) return uniform_closed(nodes, a, b);
  return rule == GridRule::gauss_legendre ? gauss_legendre(nodes, a, b) : uniform_midpoint(nodes, a, b);
}

std::vector<double> spatial_weights(const TensorGrid& g) {
  const std::size_t s = g.spatial_size();
  std::vector<double> w(s, 1.0);
  for (std::size_t i = 0; i < s; ++i) {
    std::size_t rest = i;
    for (int j = g.d - 1; j >= 0; --j) {
      const QuadratureRule& r = g.x[static_cast<std::size_t>(j)];
      w[i] *= r.weights[rest % r.size()];
      rest /= r.size();
    }
  }
  return w;
}

// Inner spatial norms of one channel at every time node.
std::vector<double> inner_norms(const SampledField& f, std::size_t channel, const std::vector<double>& wx, const Exponent& p) {
  const std::size_t s = f.grid.spatial_size();
  std::vector<double> out(f.grid.t.size());
  const auto& v = f.values[channel];
  for (std::size_t it = 0; it < out.size(); ++it) {
    out[it] = lp(std::span<const double>(v).subspan(it * s, s), wx, p);
  }
  return out;
}

std::size_t channel_index(const SampledField& f, const MultiIndex& deriv) {
  for (std::size_t c = 0; c < f.channels.size(); ++c) {
    if (f.channels[c] == deriv) return c;
  }
  throw ValidationError("sampled field lacks a required derivative channel");
}

}  // namespace

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse exponent '" + text + "'");
  }
  if (used != text.size() || !(v >= 1.0) || std::isinf(v)) throw ValidationError("exponent must be a number >= 1 or 'inf', got '" + text + "'");
  return {v};
}

std::string Exponent::str() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os << value;
  return os.str();
}

std::string NormSpec::label() const {
  return std::string(mode == NormMode::norm ? "norm" : "semi") + "_n" + std::to_string(n) + "_p" + p.str() + "_k" +
         std::to_string(k) + "_q" + q.str();
}

void validate(const NormSpec& spec) {
  if (spec.n < 0 || spec.k < 0) throw ValidationError("derivative orders must be non-negative");
  if (!(spec.p.value >= 1.0) || !(spec.q.value >= 1.0)) throw ValidationError("exponents must lie in [1, inf]");
}

GridSpec GridSpec::defaults(int d) {
  const int nodes = d <= 1 ? 257 : 65;
  return {nodes, nodes, GridRule::gauss_legendre};
}

void validate(const GridSpec& grid) {
  if (grid.nodes_t < 2 || grid.nodes_x < 2) throw ValidationError("grids need at least two nodes per axis");
}

std::size_t TensorGrid::spatial_size() const {
  std::size_t s = 1;
  for (const auto& r : x) s *= r.size();
  return s;
}

RowMatrix TensorGrid::points() const {
  const std::size_t s = spatial_size();
  RowMatrix pts(d + 1, static_cast<Eigen::Index>(size()));
  for (std::size_t it = 0; it < t.size(); ++it) {
    for (std::size_t ix = 0; ix < s; ++ix) {
      const auto col = static_cast<Eigen::Index>(it * s + ix);
      pts(0, col) = t.nodes[it];
      std::size_t rest = ix;
      for (int j = d - 1; j >= 0; --j) {
        const QuadratureRule& r = x[static_cast<std::size_t>(j)];
        pts(j + 1, col) = r.nodes[rest % r.size()];
        rest /= r.size();
      }
    }
  }
  return pts;
}

TensorGrid make_grid(const NormSpec& spec, const GridSpec& grid, int d) {
  if (d < 1) throw ValidationError("spatial dimension must be at least 1");
  return make_grid(spec, grid, Box::cube(d + 1, 0.0, 1.0));
}

TensorGrid make_grid(const NormSpec& spec, const GridSpec& grid, const Box& domain) {
  validate(spec);
  validate(grid);
  if (domain.dims() < 2) throw ValidationError("norm domains need a time axis and at least one spatial axis");
  for (int l = 0; l < domain.dims(); ++l) {
    const auto s = static_cast<std::size_t>(l);
    if (!(domain.upper[s] > domain.lower[s])) throw ValidationError("degenerate norm domain");
  }
  TensorGrid g;
  g.d = domain.dims() - 1;
  g.t = axis_rule(spec.q, grid.nodes_t, grid.rule, domain.lower[0], domain.upper[0]);
  for (int j = 1; j <= g.d; ++j) {
    const auto s = static_cast<std::size_t>(j);
    g.x.push_back(axis_rule(spec.p, grid.nodes_x, grid.rule, domain.lower[s], domain.upper[s]));
  }
  return g;
}

std::vector<MultiIndex> required_channels(const NormSpec& spec, int d) {
  std::vector<MultiIndex> out;
  const int k_lo = spec.mode == NormMode::norm ? 0 : spec.k;
  const int n_lo = spec.mode == NormMode::norm ? 0 : spec.n;
  for (int kappa = k_lo; kappa <= spec.k; ++kappa) {
    for (int deg = n_lo; deg <= spec.n; ++deg) {
      for (const MultiIndex& alpha : indices_of_degree(d, deg)) {
        MultiIndex c{kappa};
        c.insert(c.end(), alpha.begin(), alpha.end());
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

const std::vector<double>& SampledField::channel(const MultiIndex& deriv) const {
  return values[channel_index(*this, deriv)];
}

ChannelSampler oracle_sampler(const JetOracle& u) {
  return [u](const RowMatrix& points, const std::vector<MultiIndex>& channels) {
    const int d = u.d();
    if (points.rows() != d + 1) throw ShapeError("points do not match the oracle dimension");
    RowMatrix out(static_cast<Eigen::Index>(channels.size()), points.cols());
    std::vector<double> x(static_cast<std::size_t>(d));
    for (Eigen::Index p = 0; p < points.cols(); ++p) {
      for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = points(j + 1, p);
      for (std::size_t c = 0; c < channels.size(); ++c) {
        out(static_cast<Eigen::Index>(c), p) = u.derivative(channels[c], points(0, p), x);
      }
    }
    return out;
  };
}

ChannelSampler network_sampler(const Network& net) {
  if (net.output_dim() != 1) throw ShapeError("norms need a single-output network");
  return [net](const RowMatrix& points, const std::vector<MultiIndex>& channels) {
    bool values_only = true;
    for (const auto& c : channels) {
      if (c[0] > 1 || total_degree(c) - c[0] > 1) {
        throw ValidationError("network jets provide kappa <= 1 and |alpha| <= 1 only");
      }
      if (total_degree(c) > 0) values_only = false;
    }
    RowMatrix out(static_cast<Eigen::Index>(channels.size()), points.cols());
    if (values_only) {
      const RowMatrix v = realize_batch(net, points);
      for (Eigen::Index c = 0; c < out.rows(); ++c) out.row(c) = v.row(0);
      return out;
    }
    // Keep one layer's jet matrix around 32 MB.
    Eigen::Index width = net.input_dim();
    for (const auto& layer : net.layers()) width = std::max(width, layer.rows());
    const Eigen::Index slots = 2 * net.input_dim();
    const Eigen::Index chunk = std::max<Eigen::Index>(1, (Eigen::Index{1} << 22) / (width * slots));
    for (Eigen::Index start = 0; start < points.cols(); start += chunk) {
      const Eigen::Index len = std::min(chunk, points.cols() - start);
      const JetBatch jets = eval_jet_batch(net, points.middleCols(start, len));
      for (std::size_t c = 0; c < channels.size(); ++c) {
        const MultiIndex& ch = channels[c];
        int axis = -1;
        for (std::size_t j = 1; j < ch.size(); ++j) {
          if (ch[j] == 1) axis = static_cast<int>(j) - 1;
        }
        const RowMatrix* src = nullptr;
        if (axis < 0) {
          src = ch[0] == 0 ? &jets.value : &jets.d_t;
        } else {
          src = ch[0] == 0 ? &jets.d_x[static_cast<std::size_t>(axis)] : &jets.d_tx[static_cast<std::size_t>(axis)];
        }
        out.block(static_cast<Eigen::Index>(c), start, 1, len) = src->row(0);
      }
    }
    return out;
  };
}

ChannelSampler combine(double a, ChannelSampler f, double b, ChannelSampler g) {
  return [a, b, f = std::move(f), g = std::move(g)](const RowMatrix& points, const std::vector<MultiIndex>& channels) {
    RowMatrix out = f(points, channels);
    out *= a;
    out += b * g(points, channels);
    return out;
  };
}

SampledField sample(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, int d) {
  return sample(f, spec, make_grid(spec, grid, d));
}

SampledField sample(const ChannelSampler& f, const NormSpec& spec, const TensorGrid& grid) {
  SampledField field;
  field.grid = grid;
  field.channels = required_channels(spec, grid.d);
  const RowMatrix pts = field.grid.points();
  const auto total = static_cast<std::size_t>(pts.cols());
  field.values.assign(field.channels.size(), std::vector<double>(total));
  const std::size_t chunks = (total + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, [&](std::size_t ci) {
    const std::size_t start = ci * kSampleChunk;
    const std::size_t len = std::min(kSampleChunk, total - start);
    const RowMatrix v = f(pts.middleCols(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(len)), field.channels);
    for (std::size_t c = 0; c < field.channels.size(); ++c) {
      for (std::size_t i = 0; i < len; ++i) field.values[c][start + i] = v(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i));
    }
  });
  return field;
}

double nested_norm(const SampledField& field, const NormSpec& spec) {
  validate(spec);
  const TensorGrid& g = field.grid;
  if (g.size() == 0) throw ValidationError("empty grid");
  const std::vector<double> wx = spatial_weights(g);
  const int d = g.d;

  if (spec.mode == NormMode::seminorm) {
    std::vector<double> parts;
    for (const MultiIndex& alpha : indices_of_degree(d, spec.n)) {
      MultiIndex c{spec.k};
      c.insert(c.end(), alpha.begin(), alpha.end());
      const std::vector<double> inner = inner_norms(field, channel_index(field, c), wx, spec.p);
      parts.push_back(lp(inner, g.t.weights, spec.q));
    }
    return power_sum_root(parts, spec.p);
  }

  std::vector<double> per_kappa;
  for (int kappa = 0; kappa <= spec.k; ++kappa) {
    std::vector<std::vector<double>> inners;
    for (int deg = 0; deg <= spec.n; ++deg) {
      for (const MultiIndex& alpha : indices_of_degree(d, deg)) {
        MultiIndex c{kappa};
        c.insert(c.end(), alpha.begin(), alpha.end());
        inners.push_back(inner_norms(field, channel_index(field, c), wx, spec.p));
      }
    }
    std::vector<double> combined(g.t.size());
    std::vector<double> terms(inners.size());
    for (std::size_t it = 0; it < combined.size(); ++it) {
      for (std::size_t a = 0; a < inners.size(); ++a) terms[a] = inners[a][it];
      combined[it] = power_sum_root(terms, spec.p);
    }
    per_kappa.push_back(lp(combined, g.t.weights, spec.q));
  }
  return pairwise_sum(per_kappa);
}

double estimate_norm(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, int d) {
  return nested_norm(sample(f, spec, grid, d), spec);
}

double estimate_norm(const ChannelSampler& f, const NormSpec& spec, const GridSpec& grid, const Box& domain) {
  return nested_norm(sample(f, spec, make_grid(spec, grid, domain)), spec);
}

double norm_of_network(const Network& net, const NormSpec& spec, const GridSpec& grid) {
  if (net.input_dim() < 2) throw ShapeError("norms need a network over (t, x) with d >= 1");
  return estimate_norm(network_sampler(net), spec, grid, static_cast<int>(net.input_dim()) - 1);
}

double norm_of_oracle(const JetOracle& u, const NormSpec& spec, const GridSpec& grid) {
  return estimate_norm(oracle_sampler(u), spec, grid, u.d());
}

double norm_of_oracle(const JetOracle& u, const NormSpec& spec, const GridSpec& grid, const Box& domain) {
  if (domain.dims() != u.d() + 1) throw ShapeError("norm domain does not match the oracle dimension");
  return estimate_norm(oracle_sampler(u), spec, grid, domain);
}

ProductRuleCheck product_rule_check(const JetOracle& f, const JetOracle& g, const GridSpec& grid, double tolerance) {
  if (f.d() != g.d()) throw ShapeError("product rule needs oracles of equal dimension");
  const int d = f.d();
  const NormSpec sup{1, Exponent::infinity(), 1, Exponent::infinity(), NormMode::norm};
  const TensorGrid tg = make_grid(sup, grid, d);
  const RowMatrix pts = tg.points();

  // s[which][n][k]: which = 0 for f, 1 for g, 2 for fg.
  double s[3][2][2] = {};
  std::vector<double> x(static_cast<std::size_t>(d));
  for (Eigen::Index p = 0; p < pts.cols(); ++p) {
    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = pts(j + 1, p);
    const Jet2 a = f.jet(pts(0, p), x);
    const Jet2 b = g.jet(pts(0, p), x);
    Jet2 ab(d);
    ab.value = a.value * b.value;
    ab.d_t = a.d_t * b.value + a.value * b.d_t;
    ab.d_x = a.d_x * b.value + a.value * b.d_x;
    ab.d_tx = a.d_tx * b.value + a.d_x * b.d_t + a.d_t * b.d_x + a.value * b.d_tx;
    const Jet2* jets[3] = {&a, &b, &ab};
    for (int w = 0; w < 3; ++w) {
      const Jet2& j = *jets[w];
      s[w][0][0] = std::max(s[w][0][0], std::abs(j.value));
      s[w][0][1] = std::max(s[w][0][1], std::abs(j.d_t));
      s[w][1][0] = std::max(s[w][1][0], j.d_x.cwiseAbs().maxCoeff());
      s[w][1][1] = std::max(s[w][1][1], j.d_tx.cwiseAbs().maxCoeff());
    }
  }
  const auto& F = s[0];
  const auto& G = s[1];
  const auto& P = s[2];
  ProductRuleCheck r;
  r.margin_space = F[1][0] * G[0][0] + F[0][0] * G[1][0] - P[1][0];
  r.margin_time = F[0][1] * G[0][0] + F[0][0] * G[0][1] - P[0][1];
  r.margin_mixed = F[1][1] * G[0][0] + F[0][1] * G[1][0] + F[1][0] * G[0][1] + F[0][0] * G[1][1] - P[1][1];
  const double scale = 1.0 + P[0][0] + P[1][0] + P[0][1] + P[1][1];
  r.passed = r.margin_space >= -tolerance * scale && r.margin_time >= -tolerance * scale && r.margin_mixed >= -tolerance * scale;
  return r;
}

}  // namespace recu

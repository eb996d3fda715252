// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers on
// the command line to run a subset; --expect-fail N marks a criterion whose
// failure is known, so it still prints FAIL but does not set the exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recu/assembler.hpp"
#include "recu/gadgets.hpp"
#include "recu/harness.hpp"
#include "recu/jet.hpp"
#include "recu/network.hpp"
#include "recu/oracle.hpp"
#include "recu/partition.hpp"
#include "recu/sobolev.hpp"
#include "recu/taylor.hpp"

using namespace recu;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr double kInf = INFINITY;

RowMatrix uniform_points(std::mt19937_64& rng, int rows, Eigen::Index count, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  RowMatrix pts(rows, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    for (int r = 0; r < rows; ++r) pts(r, c) = dist(rng);
  }
  return pts;
}

double relu3(long double z) { return z > 0 ? static_cast<double>(z * z * z) : 0.0; }

// The plotted bump of the paper variant, written out term by term.
double paper_bump(double x) {
  const long double y = 1.5L * x;
  const long double s = relu3(y + 3) - 2 * (long double)relu3(y + 2.5L) + 2 * (long double)relu3(y + 1.5L) -
                        relu3(y + 1) - relu3(y - 1) + 2 * (long double)relu3(y - 1.5L) -
                        2 * (long double)relu3(y - 2.5L) + relu3(y - 3);
  return static_cast<double>(2.0L / 3.0L * s);
}

// Centered cubic B-spline; the bspline bump is B(y+1) + B(y) + B(y-1).
double cubic_bspline(double u) {
  const double a = std::abs(u);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return 0.0;
}

double bspline_bump(double y) { return cubic_bspline(y + 1.0) + cubic_bspline(y) + cubic_bspline(y - 1.0); }

double max_gap(const Network& net, const RowMatrix& pts, const std::function<double(Eigen::Index)>& expected) {
  const RowMatrix out = realize_batch(net, pts);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < pts.cols(); ++c) worst = std::max(worst, std::abs(out(0, c) - expected(c)));
  return worst;
}

// ---------------------------------------------------------------- 1
Outcome gadget_exactness() {
  Outcome o;
  std::mt19937_64 rng(101);
  constexpr Eigen::Index kSamples = 10000;
  double worst = 0.0;

  for (double r : {1.0, 2.5}) {
    const RowMatrix x = uniform_points(rng, 1, kSamples, -r, r);
    worst = std::max(worst, max_gap(gadgets::identity(1, r), x, [&](Eigen::Index c) { return x(0, c); }));
    worst = std::max(worst, max_gap(gadgets::square(r), x, [&](Eigen::Index c) { return x(0, c) * x(0, c); }));
    const RowMatrix tx = uniform_points(rng, 2, kSamples, -r, r);
    worst = std::max(worst, max_gap(gadgets::product(r), tx, [&](Eigen::Index c) { return tx(0, c) * tx(1, c); }));
  }
  {
    const double radius[] = {1.0, 2.0, 3.0};
    const Network id3 = gadgets::identity(radius);
    RowMatrix x(3, kSamples);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (Eigen::Index c = 0; c < kSamples; ++c) {
      for (int r = 0; r < 3; ++r) x(r, c) = radius[r] * unit(rng);
    }
    const RowMatrix out = realize_batch(id3, x);
    worst = std::max(worst, (out - x).cwiseAbs().maxCoeff());
  }
  {
    const RowMatrix x = uniform_points(rng, 1, kSamples, 0.0, 1.0);
    worst = std::max(worst, max_gap(gadgets::monomial_extractor(), x, [&](Eigen::Index c) { return x(0, c); }));
  }
  const RowMatrix y = uniform_points(rng, 1, kSamples, -4.0, 4.0);
  worst = std::max(worst, max_gap(bump_network(BumpVariant::paper), y, [&](Eigen::Index c) { return paper_bump(y(0, c)); }));
  worst = std::max(worst, max_gap(bump_network(BumpVariant::bspline), y, [&](Eigen::Index c) { return bspline_bump(y(0, c)); }));
  o.require(worst <= 1e-11, "closed-form agreement");

  const SizeAccount bump = size_account(bump_network(BumpVariant::paper));
  const SizeAccount prod = size_account(gadgets::product(3.0));
  const SizeAccount sq = size_account(gadgets::square(3.0));
  o.require(bump.weights == 24 && bump.neurons == 10, "bump size");
  o.require(prod.weights == 16 && prod.neurons == 7, "product size");
  o.require(sq.weights == 7 && sq.neurons == 4, "square size");
  o.detail << "max abs err " << sci(worst) << "; sizes bump " << bump.weights << "/" << bump.neurons << ", product "
           << prod.weights << "/" << prod.neurons << ", square " << sq.weights << "/" << sq.neurons;
  return o;
}

// ---------------------------------------------------------------- 2
Network random_network(std::mt19937_64& rng, Eigen::Index in, Eigen::Index out, int depth) {
  std::uniform_int_distribution<int> width(1, 5);
  std::uniform_real_distribution<double> value(-0.7, 0.7);
  std::bernoulli_distribution keep(0.7);
  std::vector<Layer> layers;
  Eigen::Index cols = in;
  for (int l = 0; l < depth; ++l) {
    const Eigen::Index rows = l + 1 == depth ? out : width(rng);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = keep(rng) ? value(rng) : 0.0;
      b[i] = keep(rng) ? value(rng) : 0.0;
    }
    layers.push_back(Layer::from_dense(a, b));
    cols = rows;
  }
  return Network(in, std::move(layers));
}

Outcome calculus_semantics() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> depth(1, 4);
  double worst_concat = 0.0;
  double worst_par = 0.0;
  bool sizes_ok = true;
  for (int pair = 0; pair < 100; ++pair) {
    const Eigen::Index in = dim(rng);
    const Eigen::Index mid = dim(rng);
    const Eigen::Index out = dim(rng);
    const Network g = random_network(rng, in, mid, depth(rng));
    const Network f = random_network(rng, mid, out, depth(rng));
    const Network h = random_network(rng, in, dim(rng), static_cast<int>(g.depth()));

    const RowMatrix x = uniform_points(rng, static_cast<int>(in), 50, -1.0, 1.0);
    const RowMatrix composed = realize_batch(concatenate(f, g), x);
    const RowMatrix nested = realize_batch(f, realize_batch(g, x));
    for (Eigen::Index i = 0; i < composed.size(); ++i) {
      worst_concat = std::max(worst_concat, std::abs(composed(i) - nested(i)) / (1.0 + std::abs(nested(i))));
    }
    const RowMatrix stacked = realize_batch(parallelize(g, h), x);
    const RowMatrix gx = realize_batch(g, x);
    const RowMatrix hx = realize_batch(h, x);
    worst_par = std::max(worst_par, (stacked.topRows(gx.rows()) - gx).cwiseAbs().maxCoeff());
    worst_par = std::max(worst_par, (stacked.bottomRows(hx.rows()) - hx).cwiseAbs().maxCoeff());

    const SizeAccount sf = size_account(f);
    const SizeAccount sg = size_account(g);
    const SizeAccount sc = size_account(concatenate(f, g));
    const SizeAccount sp = size_account(parallelize(g, h));
    sizes_ok = sizes_ok && sc.depth == sf.depth + sg.depth - 1;
    sizes_ok = sizes_ok && sc.weights <= sf.weights + sg.weights + sf.weights * sg.weights;
    sizes_ok = sizes_ok && sc.neurons <= sf.neurons + sg.neurons;
    sizes_ok = sizes_ok && sp.weights == sg.weights + size_account(h).weights;
    sizes_ok = sizes_ok && sp.depth == sg.depth;
  }
  o.require(worst_concat <= 1e-12, "concatenation identity");
  o.require(worst_par <= 1e-12, "parallelization identity");
  o.require(sizes_ok, "size relations");
  o.detail << "100 pairs; concat rel err " << sci(worst_concat) << ", parallel err " << sci(worst_par)
           << ", integer size relations " << (sizes_ok ? "hold" : "violated");
  return o;
}

// ---------------------------------------------------------------- 3
Outcome partition_of_unity() {
  Outcome o;
  double worst = 0.0;
  for (int d : {1, 2}) {
    for (int N : {1, 2, 4, 8}) {
      const PartitionAudit audit = partition_check(PartitionSpec{d, N, BumpVariant::bspline}, 50);
      worst = std::max(worst, audit.max_deviation);
    }
  }
  o.require(worst <= 1e-12, "bspline partition sum");

  const double at0 = psi(BumpVariant::paper, 0.0);
  double outside = 0.0;
  double plateau = 0.0;
  double figure = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double y = -5.0 + 10.0 * i / 4000.0;
    const double v = psi(BumpVariant::paper, y);
    figure = std::max(figure, std::abs(v - paper_bump(y)));
    if (std::abs(y) >= 2.0) outside = std::max(outside, std::abs(v));
    if (std::abs(y) < 2.0 / 3.0) plateau = std::max(plateau, std::abs(v - 1.0));
  }
  o.require(std::abs(at0 - 1.0) <= 1e-12, "paper psi(0) = 1");
  o.require(outside <= 1e-12, "paper support [-2, 2]");
  o.require(figure <= 1e-12, "paper figure values");
  const double xs[] = {0.0};
  const double deficit = partition_sum(PartitionSpec{1, 1, BumpVariant::paper}, 1.0 / 3.0, xs);
  o.require(std::abs(deficit - 11.0 / 12.0) <= 1e-12, "paper sum deficit at t = 1/3");
  o.detail << "bspline max |sum - 1| " << sci(worst) << " over d in {1,2}, N in {1,2,4,8}; paper psi(0) = " << at0
           << ", |psi| off support " << sci(outside) << ", plateau dev " << sci(plateau) << ", sum at t=1/3 " << deficit;
  return o;
}

// ---------------------------------------------------------------- 4
Outcome taylor_reproduction() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.05, 0.5);
  double worst = 0.0;
  std::size_t cases = 0;
  for (int d : {1, 2}) {
    for (int m = 1; m <= 4; ++m) {
      for (BallMetric metric : {BallMetric::euclidean, BallMetric::cross}) {
        CutoffSpec ball;
        for (int l = 0; l <= d; ++l) ball.center.push_back(unit(rng));
        ball.radius = radius(rng);
        ball.metric = metric;
        const BallQuadrature quad = ball_quadrature(ball);
        for (const MultiIndex& e : graded_indices(d + 1, m - 1)) {
          const JetOracle p = polynomial_oracle("monomial", d, {{1.0, e}});
          const LocalPolynomial q = averaged_taylor(p, m, ball, quad);
          for (std::size_t i = 0; i < q.exponents().size(); ++i) {
            const double expected = q.exponents()[i] == e ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(q.coefficients()[i] - expected));
          }
          ++cases;
        }
      }
    }
  }
  o.require(worst <= 1e-9, "coefficient reproduction");
  o.detail << cases << " monomial/ball cases, max coefficient err " << sci(worst);
  return o;
}

std::vector<NormSpec> four_specs(Exponent p, NormMode mode) {
  std::vector<NormSpec> specs;
  for (int n : {0, 1}) {
    for (int k : {0, 1}) specs.push_back(NormSpec{n, p, k, p, mode});
  }
  return specs;
}

void check_slopes(Outcome& o, const RateReport& report, const std::vector<NormSpec>& specs, int m,
                  const std::string& tag) {
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const double need = (m - specs[c].n - specs[c].k) - 0.2;
    const SlopeFit& fit = report.slopes[c];
    o.detail << tag << specs[c].label() << " " << sci(fit.slope) << " (res " << sci(fit.residual) << "); ";
    o.require(fit.slope >= need, tag + specs[c].label() + " slope");
    o.require(fit.residual < 0.3, tag + specs[c].label() + " residual");
  }
}

// ---------------------------------------------------------------- 5
Outcome bramble_hilbert() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.target = "sin_sin";
  cfg.d = 1;
  cfg.m = 3;
  cfg.grid = GridSpec{65, 65, GridRule::gauss_legendre};
  for (Exponent p : {Exponent::infinity(), Exponent{2.0}}) {
    for (const NormSpec& s : four_specs(p, NormMode::seminorm)) cfg.norms.push_back(s);
  }
  const double half_widths[] = {0.2, 0.1, 0.05, 0.025};
  const RateReport report = run_taylor_rates(cfg, half_widths);
  check_slopes(o, report, cfg.norms, cfg.m, "");
  return o;
}

// ---------------------------------------------------------------- 6
Outcome localized_rate() {
  Outcome o;
  for (const char* target : {"sin_sin", "sin_cos", "wave"}) {
    ExperimentConfig cfg;
    cfg.target = target;
    cfg.d = 1;
    cfg.m = 3;
    cfg.N_values = {2, 4, 8, 16};
    cfg.grid = GridSpec{129, 129, GridRule::gauss_legendre};
    for (Exponent p : {Exponent{2.0}, Exponent::infinity()}) {
      for (const NormSpec& s : four_specs(p, NormMode::norm)) cfg.norms.push_back(s);
    }
    const RateReport report = run_rate_sweep(cfg);
    check_slopes(o, report, cfg.norms, cfg.m, std::string(target) + ":");
  }
  return o;
}

// ---------------------------------------------------------------- 7
Outcome assembly_equivalence() {
  Outcome o;
  std::mt19937_64 rng(707);
  double worst_value = 0.0;
  double worst_jet = 0.0;
  for (int d : {1, 2}) {
    const JetOracle u = make_target("wave", d);
    for (int m : {2, 3}) {
      for (int N : {2, 4, 8}) {
        const PartitionSpec spec{d, N, BumpVariant::bspline};
        const LocalizedApproximant u_N(spec, local_polynomials(u, m, N, d));
        const Network net = assemble_P_network(u_N.polynomials(), spec);

        const RowMatrix pts = uniform_points(rng, d + 1, 10000, 0.0, 1.0);
        const RowMatrix values = realize_batch(net, pts);
        std::vector<double> x(static_cast<std::size_t>(d));
        for (Eigen::Index c = 0; c < pts.cols(); ++c) {
          for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = pts(j + 1, c);
          const double ref = u_N(pts(0, c), x);
          worst_value = std::max(worst_value, std::abs(values(0, c) - ref) / (1.0 + std::abs(ref)));
        }

        const RowMatrix jet_pts = uniform_points(rng, d + 1, 200, 0.0, 1.0);
        const JetBatch jets = eval_jet_batch(net, jet_pts);
        for (Eigen::Index c = 0; c < jet_pts.cols(); ++c) {
          for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = jet_pts(j + 1, c);
          const Jet2 ref = u_N.jet(jet_pts(0, c), x);
          const Jet2 got = jets.at(0, c);
          auto gap = [&](double a, double b) { worst_jet = std::max(worst_jet, std::abs(a - b) / (1.0 + std::abs(b))); };
          gap(got.value, ref.value);
          gap(got.d_t, ref.d_t);
          for (int j = 0; j < d; ++j) {
            gap(got.d_x[j], ref.d_x[j]);
            gap(got.d_tx[j], ref.d_tx[j]);
          }
        }
      }
    }
  }
  o.require(worst_value <= 1e-9, "value agreement");
  o.require(worst_jet <= 1e-6, "jet agreement");
  o.detail << "d in {1,2}, m in {2,3}, N in {2,4,8}: value err " << sci(worst_value) << ", jet err " << sci(worst_jet);
  return o;
}

// ---------------------------------------------------------------- 8
Outcome architecture_bounds() {
  Outcome o;
  const std::vector<std::string> suite{"sin_sin", "sin_cos", "wave", "exp", "poly_linear", "poly_tx2", "zero"};
  ExperimentConfig cfg;
  cfg.d = 1;
  cfg.m = 3;
  cfg.N_values.clear();
  for (int N = 2; N <= 16; ++N) cfg.N_values.push_back(N);
  const NormSpec spec{0, Exponent::infinity(), 0, Exponent::infinity(), NormMode::norm};
  cfg.norms = {spec};
  cfg.grid = GridSpec{129, 129, GridRule::gauss_legendre};
  const Calibration cal = calibrate_constants(cfg, suite);
  o.require(std::isfinite(cal.C_hat) && cal.C_hat > 0.0, "finite positive C_hat");

  // Achieved error with big-N driven by the calibrated constant.
  const double eps_values[] = {0.4, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  const GridSpec norm_grid{33, 33, GridRule::gauss_legendre};
  std::size_t runs = 0;
  std::size_t skipped = 0;
  double worst_ratio = 0.0;
  std::map<std::pair<std::string, int>, double> cache;
  for (const auto& name : suite) {
    const JetOracle u = make_target(name, cfg.d);
    const double norm = target_norm(u, cfg.m, spec.p, norm_grid);
    for (double eps : eps_values) {
      ApproxConfig ac;
      ac.d = cfg.d;
      ac.m = cfg.m;
      ac.eps = eps;
      ac.B = norm > 0.0 ? norm : 1.0;
      ac.C = cal.C_hat;
      const int N = big_N(ac);
      if (N > 16) {
        ++skipped;
        continue;
      }
      auto it = cache.find({name, N});
      if (it == cache.end()) {
        const Approximation approx = approximate(u, ac);
        const double err = estimate_norm(combine(1.0, oracle_sampler(u), -1.0, network_sampler(approx.network)), spec,
                                         cfg.grid, cfg.d);
        it = cache.emplace(std::make_pair(name, N), err).first;
      }
      worst_ratio = std::max(worst_ratio, it->second / std::sqrt(eps));
      ++runs;
    }
  }
  o.require(worst_ratio <= 1.0, "achieved error <= sqrt(eps)");

  // Architecture growth along an eps sweep covering N = 2..16.
  ExperimentConfig sizes = cfg;
  sizes.B = target_norm(make_target("sin_sin", 1), cfg.m, spec.p, norm_grid);
  sizes.C = cal.C_hat;
  for (double eps : {5e-7, 2e-6, 1e-5, 5e-5, 2e-4, 1e-3, 0.005, 0.02, 0.1, 0.4}) {
    ApproxConfig ac;
    ac.m = sizes.m;
    ac.eps = eps;
    ac.B = sizes.B;
    ac.C = sizes.C;
    if (big_N(ac) <= 16) sizes.eps_values.push_back(eps);
  }
  const RateReport report = run_size_sweep(sizes);
  o.require(report.depth_constant, "depth constant");
  o.require(report.weights_vs_N_plus_1.slope <= 2.0 * (cfg.d + 1) + 0.1, "log M vs log(N+1) slope");
  o.detail << "C_hat " << sci(cal.C_hat) << "; " << runs << " big-N runs (" << skipped
           << " above the N guardrail skipped), max err/sqrt(eps) " << sci(worst_ratio) << "; N from "
           << report.rows.front().N << " to " << report.rows.back().N << ", depth " << report.rows.front().depth
           << (report.depth_constant ? " constant" : " varies") << ", slope log M vs log(N+1) "
           << sci(report.weights_vs_N_plus_1.slope) << ", vs log(1/eps') " << sci(report.weights_vs_inv_eps_prime.slope);
  return o;
}

// ---------------------------------------------------------------- 9
Outcome product_rule() {
  Outcome o;
  std::mt19937_64 rng(909);
  const std::vector<std::string> names = target_names();
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  double worst = INFINITY;
  int passed = 0;
  for (int i = 0; i < 20; ++i) {
    const JetOracle f = make_target(names[pick(rng)], 1);
    const JetOracle g = make_target(names[pick(rng)], 1);
    const ProductRuleCheck check = product_rule_check(f, g, GridSpec{65, 65, GridRule::gauss_legendre});
    passed += check.passed ? 1 : 0;
    worst = std::min({worst, check.margin_space, check.margin_time, check.margin_mixed});
  }
  o.require(passed == 20, "all pairs");
  o.detail << passed << "/20 pairs pass, smallest margin " << sci(worst);
  return o;
}

// ---------------------------------------------------------------- 10
Outcome determinism() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.target = "wave";
  cfg.d = 1;
  cfg.m = 3;
  cfg.N_values = {2, 4, 8};
  cfg.use_network = true;
  cfg.seed = 1234;
  cfg.norms = four_specs(Exponent{2.0}, NormMode::norm);
  cfg.grid = GridSpec{65, 65, GridRule::gauss_legendre};
  const std::string first = to_csv(run_rate_sweep(cfg));
  const std::string second = to_csv(run_rate_sweep(cfg));
  o.require(first == second, "byte-identical CSV");
  o.detail << first.size() << " CSV bytes, runs " << (first == second ? "identical" : "differ");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "gadget exactness", 1.0, gadget_exactness},
      {2, "calculus semantics", 5.0, calculus_semantics},
      {3, "partition of unity", 10.0, partition_of_unity},
      {4, "averaged Taylor reproduction", 30.0, taylor_reproduction},
      {5, "Bramble-Hilbert rate", 60.0, bramble_hilbert},
      {6, "localized polynomial rate", 120.0, localized_rate},
      {7, "assembly equivalence", 120.0, assembly_equivalence},
      {8, "architecture bounds", 300.0, architecture_bounds},
      {9, "product rule", 30.0, product_rule},
      {10, "determinism", kInf, determinism},
  };
  std::set<int> wanted;
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected_failures.insert(std::atoi(argv[++i]));
    } else {
      wanted.insert(std::atoi(arg.c_str()));
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      Outcome o = c.run();
      pass = o.pass;
      detail = o.detail.str();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      pass = false;
      detail += " [failed: runtime limit]";
    }
    char timing[64];
    if (std::isfinite(c.limit_seconds)) {
      std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", seconds, c.limit_seconds);
    } else {
      std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    }
    const bool expected = expected_failures.contains(c.id);
    std::printf("criterion %2d %-30s %s  %s (%s)\n", c.id, c.name,
                pass ? "PASS" : (expected ? "FAIL (expected)" : "FAIL"), detail.c_str(), timing);
    std::fflush(stdout);
    failures += pass || expected ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

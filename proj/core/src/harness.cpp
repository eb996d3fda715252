#include "recu/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "recu/oracle.hpp"
#include "recu/taylor.hpp"

namespace recu {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<NormSpec> norms_or_default(const ExperimentConfig& cfg) {
  if (!cfg.norms.empty()) return cfg.norms;
  return {NormSpec{0, Exponent::infinity(), 0, Exponent::infinity(), NormMode::seminorm}};
}

double seconds_since(Clock::time_point start, bool timing) {
  return timing ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;
}

void fill_sizes(SweepRow& row, const SizeAccount& size) {
  row.depth = size.depth;
  row.weights = size.weights;
  row.neurons = size.neurons;
}

double network_agreement(const Network& net, const LocalizedApproximant& u_N, int d, std::uint64_t seed) {
  constexpr Eigen::Index kPoints = 1000;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RowMatrix pts(d + 1, kPoints);
  for (Eigen::Index p = 0; p < kPoints; ++p) {
    for (int l = 0; l <= d; ++l) pts(l, p) = unit(rng);
  }
  const RowMatrix values = realize_batch(net, pts);
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (Eigen::Index p = 0; p < kPoints; ++p) {
    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = pts(j + 1, p);
    worst = std::max(worst, std::abs(values(0, p) - u_N(pts(0, p), x)));
  }
  return worst;
}

nlohmann::json fit_json(const SlopeFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"points", f.points}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("slope fit needs equally many x and y values");
  if (x.size() < 2) throw ValidationError("slope fit needs at least two points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  SlopeFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) return fit;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ValidationError("d must be at least 1");
  if (cfg.m < 1) throw ValidationError("m must be at least 1");
  const auto names = target_names();
  if (std::find(names.begin(), names.end(), cfg.target) == names.end()) {
    throw ValidationError("unknown target '" + cfg.target + "'");
  }
  if (!std::is_sorted(cfg.N_values.begin(), cfg.N_values.end())) throw ValidationError("N values must be sorted");
  for (int N : cfg.N_values) {
    if (N < 1) throw ValidationError("N values must be positive");
    if (!cfg.allow_large && N > 16) throw ValidationError("N above 16 needs the large-run override");
  }
  if (!std::is_sorted(cfg.eps_values.begin(), cfg.eps_values.end())) throw ValidationError("eps values must be sorted");
  for (double e : cfg.eps_values) {
    if (!(e > 0.0 && e < 0.5)) throw ValidationError("eps values must lie in (0, 1/2)");
  }
  if (!cfg.allow_large && (cfg.d > 2 || cfg.m > 4)) throw ValidationError("d <= 2 and m <= 4 unless large runs are allowed");
  for (const auto& spec : cfg.norms) {
    validate(spec);
    if (spec.n > 1 || spec.k > 1) throw ValidationError("error norms support n, k in {0, 1}");
    if (cfg.m < spec.n + spec.k + 1) {
      throw ValidationError("m = " + std::to_string(cfg.m) + " is below n + k + 1 for " + spec.label());
    }
  }
  validate(cfg.grid);
  if (cfg.quadrature_nodes < 2) throw ValidationError("quadrature needs at least two nodes per axis");
}

RateReport run_rate_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.N_values.empty()) throw ValidationError("the N sweep list is empty");
  const JetOracle u = make_target(cfg.target, cfg.d);
  const std::vector<NormSpec> norms = norms_or_default(cfg);

  RateReport report;
  report.experiment = "rates";
  report.sweep_name = "N";
  for (const auto& s : norms) report.error_columns.push_back(s.label());
  if (cfg.use_network) report.error_columns.push_back("net_vs_uN");

  for (int N : cfg.N_values) {
    const auto start = Clock::now();
    SweepRow row;
    row.sweep = N;
    row.N = N;
    const LocalizedApproximant approx = u_N_approximant(u, cfg.m, N, cfg.d, cfg.variant, cfg.quadrature_nodes);
    const ChannelSampler error = combine(1.0, oracle_sampler(u), -1.0, approx.sampler());
    for (const auto& spec : norms) row.errors.push_back(estimate_norm(error, spec, cfg.grid, cfg.d));
    const PartitionSpec pspec{cfg.d, N, cfg.variant};
    if (cfg.use_network) {
      const Network net = assemble_P_network(approx.polynomials(), pspec);
      row.errors.push_back(network_agreement(net, approx, cfg.d, cfg.seed + static_cast<std::uint64_t>(N)));
    }
    fill_sizes(row, assembly_size(pspec, cfg.m));
    row.seconds = seconds_since(start, cfg.timing);
    report.rows.push_back(std::move(row));
  }

  std::vector<double> h;
  for (const auto& r : report.rows) h.push_back(1.0 / r.N);
  for (std::size_t c = 0; c < norms.size(); ++c) {
    std::vector<double> e;
    for (const auto& r : report.rows) e.push_back(r.errors[c]);
    report.slopes.push_back(fit_loglog(h, e));
  }
  for (const auto& r : report.rows) report.depth_constant = report.depth_constant && r.depth == report.rows.front().depth;
  report.notes.push_back("error slopes are fitted against 1/N");
  return report;
}

RateReport run_size_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.eps_values.empty()) throw ValidationError("the eps sweep list is empty");
  RateReport report;
  report.experiment = "sizes";
  report.sweep_name = "eps";
  std::map<int, SizeAccount> cache;
  std::vector<double> inv_eps_prime;
  std::vector<double> n_plus_1;
  std::vector<double> weights;
  for (double eps : cfg.eps_values) {
    const auto start = Clock::now();
    ApproxConfig ac;
    ac.d = cfg.d;
    ac.m = cfg.m;
    ac.n = cfg.n;
    ac.k = cfg.k;
    ac.eps = eps;
    ac.B = cfg.B;
    ac.C = cfg.C;
    ac.variant = cfg.variant;
    ac.allow_large = cfg.allow_large;
    const int N = big_N(ac);
    if (!cfg.allow_large && N > 16) throw ValidationError("eps = " + format_number(eps) + " gives N = " + std::to_string(N) + " above the guardrail of 16");
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, assembly_size(PartitionSpec{cfg.d, N, cfg.variant}, cfg.m)).first;
    SweepRow row;
    row.sweep = eps;
    row.N = N;
    fill_sizes(row, it->second);
    row.seconds = seconds_since(start, cfg.timing);
    inv_eps_prime.push_back(1.0 / std::sqrt(eps));
    n_plus_1.push_back(N + 1.0);
    weights.push_back(static_cast<double>(row.weights));
    report.rows.push_back(std::move(row));
  }
  if (weights.size() >= 2) {
    report.weights_vs_inv_eps_prime = fit_loglog(inv_eps_prime, weights);
    report.weights_vs_N_plus_1 = fit_loglog(n_plus_1, weights);
  } else {
    report.notes.push_back("a single eps value gives no size slopes");
  }
  for (const auto& r : report.rows) report.depth_constant = report.depth_constant && r.depth == report.rows.front().depth;
  report.notes.push_back("bound exponent for M against 1/eps': " +
                         format_number(2.0 * (cfg.d + 1) / static_cast<double>(cfg.m - cfg.n - cfg.k)));
  return report;
}

Calibration calibrate_constants(const ExperimentConfig& cfg, const std::vector<std::string>& suite) {
  validate(cfg);
  if (suite.empty()) throw ValidationError("calibration suite is empty");
  if (cfg.N_values.empty()) throw ValidationError("the N sweep list is empty");
  const NormSpec spec = norms_or_default(cfg).front();
  const int rate = cfg.m - spec.n - spec.k;
  const GridSpec norm_grid{33, 33, GridRule::gauss_legendre};

  Calibration cal;
  cal.report.experiment = "calibrate";
  cal.report.sweep_name = "N";
  cal.report.error_columns = suite;
  std::vector<std::vector<double>> ratios(suite.size());
  std::vector<double> norms;
  std::vector<JetOracle> oracles;
  for (const auto& name : suite) {
    oracles.push_back(make_target(name, cfg.d));
    norms.push_back(target_norm(oracles.back(), cfg.m, spec.p, norm_grid));
  }
  for (int N : cfg.N_values) {
    const auto start = Clock::now();
    SweepRow row;
    row.sweep = N;
    row.N = N;
    for (std::size_t i = 0; i < oracles.size(); ++i) {
      const LocalizedApproximant approx = u_N_approximant(oracles[i], cfg.m, N, cfg.d, cfg.variant, cfg.quadrature_nodes);
      const double err = estimate_norm(combine(1.0, oracle_sampler(oracles[i]), -1.0, approx.sampler()), spec, cfg.grid, cfg.d);
      const double ratio = norms[i] > 0.0 ? err * std::pow(static_cast<double>(N), rate) / norms[i] : 0.0;
      row.errors.push_back(ratio);
      ratios[i].push_back(ratio);
      cal.C_hat = std::max(cal.C_hat, ratio);
    }
    row.seconds = seconds_since(start, cfg.timing);
    cal.report.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto [lo, hi] = std::minmax_element(ratios[i].begin(), ratios[i].end());
    // Targets reproduced exactly sit at the rounding floor; report them as stable.
    const double spread = *hi < 1e-8 ? 1.0 : (*lo > 0.0 ? *hi / *lo : INFINITY);
    cal.stability.emplace_back(suite[i], spread);
  }
  cal.report.notes.push_back("columns hold ||u - u_N|| N^" + std::to_string(rate) + " / ||u||_{W^{m,p}_{m,p}} for " + spec.label());
  cal.report.notes.push_back("C_hat = " + format_number(cal.C_hat));
  return cal;
}

PartitionAudit partition_check(const PartitionSpec& spec, int grid) {
  validate(spec);
  if (grid < 2) throw ValidationError("partition audit needs at least two nodes per axis");
  const int dims = spec.dims();
  std::size_t total = 1;
  for (int l = 0; l < dims; ++l) total *= static_cast<std::size_t>(grid);
  PartitionAudit audit;
  audit.points.resize(dims, static_cast<Eigen::Index>(total));
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (int l = dims - 1; l >= 0; --l) {
      const auto i = static_cast<int>(rest % static_cast<std::size_t>(grid));
      rest /= static_cast<std::size_t>(grid);
      audit.points(l, static_cast<Eigen::Index>(p)) = i == grid - 1 ? 1.0 : static_cast<double>(i) / (grid - 1);
    }
  }
  audit.sums = partition_sum(spec, audit.points);
  for (double s : audit.sums) audit.max_deviation = std::max(audit.max_deviation, std::abs(s - 1.0));
  return audit;
}

RateReport run_taylor_rates(const ExperimentConfig& cfg, std::span<const double> half_widths) {
  validate(cfg);
  if (half_widths.size() < 2) throw ValidationError("taylor rates need at least two box sizes");
  const JetOracle u = make_target(cfg.target, cfg.d);
  const std::vector<NormSpec> norms = norms_or_default(cfg);
  std::vector<double> center;
  for (int l = 0; l <= cfg.d; ++l) center.push_back(0.37 + 0.11 * l);

  RateReport report;
  report.experiment = "taylor-rates";
  report.sweep_name = "h";
  for (const auto& s : norms) report.error_columns.push_back(s.label());
  std::vector<std::vector<ShrinkageRow>> sweeps;
  for (const auto& spec : norms) {
    sweeps.push_back(bramble_hilbert_sweep(u, cfg.m, spec, center, half_widths, cfg.grid, cfg.quadrature_nodes));
  }
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    SweepRow row;
    row.sweep = sweeps.front()[i].diameter;
    for (const auto& s : sweeps) row.errors.push_back(s[i].seminorm);
    report.rows.push_back(std::move(row));
  }
  std::vector<double> h;
  for (const auto& r : report.rows) h.push_back(r.sweep);
  for (std::size_t c = 0; c < norms.size(); ++c) {
    std::vector<double> e;
    for (const auto& r : report.rows) e.push_back(r.errors[c]);
    report.slopes.push_back(fit_loglog(h, e));
  }
  report.notes.push_back("h is the box diameter; seminorms of u - Q^m u over the box");
  return report;
}

std::string to_csv(const RateReport& report) {
  std::ostringstream os;
  os << report.sweep_name;
  for (const auto& c : report.error_columns) os << ',' << c;
  os << ",L,M,neurons,seconds\n";
  for (const auto& r : report.rows) {
    os << format_number(r.sweep);
    for (double e : r.errors) os << ',' << format_number(e);
    os << ',' << r.depth << ',' << r.weights << ',' << r.neurons << ',' << format_number(r.seconds) << '\n';
  }
  return os.str();
}

std::string to_json(const RateReport& report) {
  nlohmann::json doc;
  doc["experiment"] = report.experiment;
  doc["sweep_name"] = report.sweep_name;
  doc["columns"] = report.error_columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json errors = nlohmann::json::object();
    for (std::size_t c = 0; c < r.errors.size() && c < report.error_columns.size(); ++c) {
      errors[report.error_columns[c]] = r.errors[c];
    }
    rows.push_back({{"sweep", r.sweep}, {"N", r.N}, {"errors", errors}, {"L", r.depth}, {"M", r.weights},
                    {"neurons", r.neurons}, {"seconds", r.seconds}});
  }
  doc["rows"] = rows;
  nlohmann::json slopes = nlohmann::json::object();
  for (std::size_t c = 0; c < report.slopes.size() && c < report.error_columns.size(); ++c) {
    slopes[report.error_columns[c]] = fit_json(report.slopes[c]);
  }
  doc["slopes"] = slopes;
  if (report.experiment == "sizes") {
    doc["weights_vs_inv_eps_prime"] = fit_json(report.weights_vs_inv_eps_prime);
    doc["weights_vs_N_plus_1"] = fit_json(report.weights_vs_N_plus_1);
  }
  doc["depth_constant"] = report.depth_constant;
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string partition_csv(const PartitionAudit& audit) {
  std::ostringstream os;
  os << 't';
  for (Eigen::Index j = 1; j < audit.points.rows(); ++j) os << ",x" << j;
  os << ",sum\n";
  for (Eigen::Index p = 0; p < audit.points.cols(); ++p) {
    for (Eigen::Index l = 0; l < audit.points.rows(); ++l) os << (l ? "," : "") << format_number(audit.points(l, p));
    os << ',' << format_number(audit.sums[static_cast<std::size_t>(p)]) << '\n';
  }
  return os.str();
}

void emit(const RateReport& report, ReportFormat format, const std::filesystem::path& path) {
  write_file(path, format == ReportFormat::csv ? to_csv(report) : to_json(report));
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      table.header = split(line);
      if (table.header.empty()) throw ParseError("empty header", "line 1");
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(table.header.size()),
                       "line " + std::to_string(number));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) throw ParseError("not a number: '" + c + "'", "line " + std::to_string(number));
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (number == 0) throw ParseError("empty document", "line 1");
  return table;
}

}  // namespace recu

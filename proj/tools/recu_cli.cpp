// recu: command line front end for the approximation pipeline and the
// experiment harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "recu/assembler.hpp"
#include "recu/harness.hpp"
#include "recu/parallel.hpp"
#include "recu/serialize.hpp"

namespace fs = std::filesystem;
using namespace recu;

namespace {

struct Globals {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
  bool allow_large = false;
  bool timing = false;
  std::string format = "csv";
};

// Experiment options as typed on the command line, before conversion.
struct ExperimentArgs {
  std::string target = "sin_sin";
  int d = 1;
  int m = 3;
  int n = 0;
  int k = 0;
  std::vector<int> N{2, 4, 8, 16};
  std::vector<std::string> norms;
  int grid = 129;
  std::string rule = "gauss";
  std::string variant = "bspline";
  double B = 1.0;
  double C = 1.0;
  bool use_network = false;
  int quadrature_nodes = 32;
};

BumpVariant parse_variant(const std::string& s) {
  if (s == "paper") return BumpVariant::paper;
  if (s == "bspline") return BumpVariant::bspline;
  throw ValidationError("unknown bump variant '" + s + "' (expected paper or bspline)");
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError("bad " + what + " '" + s + "'");
  return v;
}

// "n:p:k:q" with an optional ":semi" or ":norm" suffix; full norm by default.
NormSpec parse_norm(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4 && parts.size() != 5) throw ValidationError("norm spec '" + text + "' must look like n:p:k:q[:semi]");
  NormSpec spec{parse_int(parts[0], "n"), Exponent::parse(parts[1]), parse_int(parts[2], "k"), Exponent::parse(parts[3]),
                NormMode::norm};
  if (parts.size() == 5) {
    if (parts[4] == "semi") {
      spec.mode = NormMode::seminorm;
    } else if (parts[4] != "norm") {
      throw ValidationError("norm mode '" + parts[4] + "' must be semi or norm");
    }
  }
  validate(spec);
  return spec;
}

void add_experiment_options(CLI::App* cmd, ExperimentArgs& a, bool sweep_N) {
  cmd->add_option("--target", a.target, "Registry target")->capture_default_str();
  cmd->add_option("--d", a.d, "Spatial dimension")->capture_default_str();
  cmd->add_option("--m", a.m, "Approximation order")->capture_default_str();
  if (sweep_N) cmd->add_option("--N", a.N, "Grid resolutions, ascending")->capture_default_str();
  cmd->add_option("--norm", a.norms, "Norm spec n:p:k:q[:semi], repeatable");
  cmd->add_option("--grid", a.grid, "Evaluation nodes per axis")->capture_default_str();
  cmd->add_option("--grid-rule", a.rule, "gauss or midpoint")->capture_default_str();
  cmd->add_option("--variant", a.variant, "Bump variant: paper or bspline")->capture_default_str();
  cmd->add_option("--quadrature-nodes", a.quadrature_nodes, "Ball quadrature nodes per axis")->capture_default_str();
}

ExperimentConfig to_config(const ExperimentArgs& a, const Globals& g) {
  ExperimentConfig cfg;
  cfg.target = a.target;
  cfg.d = a.d;
  cfg.m = a.m;
  cfg.n = a.n;
  cfg.k = a.k;
  cfg.N_values = a.N;
  for (const auto& s : a.norms) cfg.norms.push_back(parse_norm(s));
  if (a.rule != "gauss" && a.rule != "midpoint") throw ValidationError("grid rule must be gauss or midpoint");
  cfg.grid = GridSpec{a.grid, a.grid, a.rule == "gauss" ? GridRule::gauss_legendre : GridRule::uniform_midpoint};
  validate(cfg.grid);
  cfg.variant = parse_variant(a.variant);
  cfg.B = a.B;
  cfg.C = a.C;
  cfg.use_network = a.use_network;
  cfg.quadrature_nodes = a.quadrature_nodes;
  cfg.seed = g.seed;
  cfg.timing = g.timing;
  cfg.allow_large = g.allow_large;
  return cfg;
}

ReportFormat report_format(const Globals& g) {
  if (g.format == "csv") return ReportFormat::csv;
  if (g.format == "json") return ReportFormat::json;
  throw ValidationError("format must be csv or json");
}

fs::path output_path(const Globals& g, const fs::path& name) {
  if (name.is_absolute()) return name;
  fs::create_directories(g.out_dir);
  return g.out_dir / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

fs::path emit_report(const RateReport& r, const Globals& g, const std::string& stem) {
  const ReportFormat f = report_format(g);
  const fs::path path = output_path(g, stem + (f == ReportFormat::csv ? ".csv" : ".json"));
  emit(r, f, path);
  return path;
}

void print_slopes(const RateReport& r) {
  for (std::size_t c = 0; c < r.slopes.size() && c < r.error_columns.size(); ++c) {
    const SlopeFit& s = r.slopes[c];
    std::printf("  %-28s slope %8.4f  residual %.3g  (%zu points)\n", r.error_columns[c].c_str(), s.slope, s.residual,
                s.points);
  }
}

nlohmann::json size_json(const SizeAccount& s) {
  return {{"depth", s.depth}, {"weights", s.weights}, {"neurons", s.neurons}, {"output_dim", s.output_dim}};
}

int run_approximate(const Globals& g, const ExperimentArgs& a, double eps, const std::string& p, const std::string& q,
                    const std::string& net_name, const std::string& report_name, const std::string& encoding) {
  ApproxConfig cfg;
  cfg.d = a.d;
  cfg.m = a.m;
  cfg.n = a.n;
  cfg.k = a.k;
  cfg.p = Exponent::parse(p);
  cfg.q = Exponent::parse(q);
  cfg.eps = eps;
  cfg.B = a.B;
  cfg.C = a.C;
  cfg.variant = parse_variant(a.variant);
  cfg.allow_large = g.allow_large;
  cfg.quadrature_nodes = a.quadrature_nodes;
  MatrixEncoding enc = MatrixEncoding::automatic;
  if (encoding == "dense") {
    enc = MatrixEncoding::dense;
  } else if (encoding == "sparse") {
    enc = MatrixEncoding::sparse;
  } else if (encoding != "auto") {
    throw ValidationError("encoding must be dense, sparse or auto");
  }

  const Approximation result = approximate(make_target(a.target, a.d), cfg);
  const AssemblyReport& r = result.report;
  const fs::path net_path = output_path(g, net_name);
  save_network(result.network, net_path, enc);

  nlohmann::json doc{{"target", a.target},
                     {"d", cfg.d},
                     {"m", cfg.m},
                     {"n", cfg.n},
                     {"k", cfg.k},
                     {"p", cfg.p.str()},
                     {"q", cfg.q.str()},
                     {"eps", cfg.eps},
                     {"eps_prime", r.eps_prime},
                     {"B", cfg.B},
                     {"C", cfg.C},
                     {"N", r.N},
                     {"partition_size", size_json(r.partition_size)},
                     {"monomial_size", size_json(r.monomial_size)},
                     {"total", size_json(r.total)},
                     {"subnetworks", r.subnetworks},
                     {"mask_entries", r.mask_entries},
                     {"target_norm", r.target_norm},
                     {"norm_budget_exceeded", r.norm_budget_exceeded},
                     {"seconds", g.timing ? r.seconds : 0.0},
                     {"warnings", r.warnings},
                     {"network", net_path.string()}};
  const fs::path report_path = output_path(g, report_name);
  write_text(report_path, doc.dump(2) + "\n");

  std::printf("N = %d, depth %zu, weights %zu, neurons %zu\n", r.N, r.total.depth, r.total.weights, r.total.neurons);
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("network: %s\nreport: %s\n", net_path.string().c_str(), report_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep ReCU network approximation in mixed Sobolev norms"};
  app.set_config("--config", "", "Key-value config file (TOML/INI; subcommand keys go under [subcommand])");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random sampling")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_flag("--allow-large", g.allow_large, "Lift the d <= 2, m <= 4, N <= 16 guardrails");
  app.add_flag("--timing", g.timing, "Fill the seconds column with wall-clock times");
  app.add_option("--format", g.format, "Report format: csv or json")->capture_default_str();

  ExperimentArgs a;

  auto* approx_cmd = app.add_subcommand("approximate", "Build the network for one target and tolerance");
  double eps = 0.01;
  std::string p = "inf";
  std::string q = "inf";
  std::string net_name = "net.json";
  std::string report_name = "report.json";
  std::string encoding = "auto";
  approx_cmd->add_option("--target", a.target, "Registry target")->capture_default_str();
  approx_cmd->add_option("--d", a.d, "Spatial dimension")->capture_default_str();
  approx_cmd->add_option("--m", a.m, "Approximation order")->capture_default_str();
  approx_cmd->add_option("--n", a.n, "Spatial derivative order of the error norm")->capture_default_str();
  approx_cmd->add_option("--k", a.k, "Temporal derivative order of the error norm")->capture_default_str();
  approx_cmd->add_option("--p", p, "Spatial exponent")->capture_default_str();
  approx_cmd->add_option("--q", q, "Temporal exponent")->capture_default_str();
  approx_cmd->add_option("--eps", eps, "Tolerance in (0, 1/2)")->capture_default_str();
  approx_cmd->add_option("--B", a.B, "Norm budget")->capture_default_str();
  approx_cmd->add_option("--C", a.C, "Rate constant")->capture_default_str();
  approx_cmd->add_option("--variant", a.variant, "Bump variant: paper or bspline")->capture_default_str();
  approx_cmd->add_option("--quadrature-nodes", a.quadrature_nodes, "Ball quadrature nodes per axis")->capture_default_str();
  approx_cmd->add_option("--out", net_name, "Network file, relative to the output directory")->capture_default_str();
  approx_cmd->add_option("--report", report_name, "Report file, relative to the output directory")->capture_default_str();
  approx_cmd->add_option("--encoding", encoding, "Matrix encoding: dense, sparse or auto")->capture_default_str();

  auto* rates_cmd = app.add_subcommand("rates", "Error of u_N against N");
  add_experiment_options(rates_cmd, a, true);
  rates_cmd->add_flag("--use-network", a.use_network, "Also compare the assembled network with u_N");

  auto* sizes_cmd = app.add_subcommand("sizes", "Architecture size against eps");
  std::vector<double> eps_values;
  sizes_cmd->add_option("--eps", eps_values, "Tolerances, ascending")->required();
  sizes_cmd->add_option("--d", a.d, "Spatial dimension")->capture_default_str();
  sizes_cmd->add_option("--m", a.m, "Approximation order")->capture_default_str();
  sizes_cmd->add_option("--n", a.n, "Spatial derivative order")->capture_default_str();
  sizes_cmd->add_option("--k", a.k, "Temporal derivative order")->capture_default_str();
  sizes_cmd->add_option("--B", a.B, "Norm budget")->capture_default_str();
  sizes_cmd->add_option("--C", a.C, "Rate constant")->capture_default_str();
  sizes_cmd->add_option("--variant", a.variant, "Bump variant: paper or bspline")->capture_default_str();

  auto* partition_cmd = app.add_subcommand("partition-check", "Partition-of-unity sums on a grid");
  int partition_N = 4;
  int partition_grid = 50;
  partition_cmd->add_option("--d", a.d, "Spatial dimension")->capture_default_str();
  partition_cmd->add_option("--N", partition_N, "Cells per axis")->capture_default_str();
  partition_cmd->add_option("--variant", a.variant, "Bump variant: paper or bspline")->capture_default_str();
  partition_cmd->add_option("--grid", partition_grid, "Nodes per axis")->capture_default_str();

  auto* taylor_cmd = app.add_subcommand("taylor-rates", "Averaged Taylor error against box size");
  std::vector<double> half_widths{0.2, 0.1, 0.05, 0.025};
  add_experiment_options(taylor_cmd, a, false);
  taylor_cmd->add_option("--half-width", half_widths, "Box half-widths, at least two")->capture_default_str();

  auto* cal_cmd = app.add_subcommand("calibrate", "Empirical rate constant over a target suite");
  std::vector<std::string> suite{"sin_sin", "sin_cos", "wave"};
  add_experiment_options(cal_cmd, a, true);
  cal_cmd->add_option("--suite", suite, "Targets")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g.threads > 0) set_thread_count(g.threads);

    if (*approx_cmd) return run_approximate(g, a, eps, p, q, net_name, report_name, encoding);

    if (*rates_cmd) {
      const RateReport r = run_rate_sweep(to_config(a, g));
      const fs::path path = emit_report(r, g, "rates");
      std::printf("rates for %s, m = %d: %s\n", a.target.c_str(), a.m, path.string().c_str());
      print_slopes(r);
      return 0;
    }

    if (*sizes_cmd) {
      ExperimentConfig cfg = to_config(a, g);
      cfg.eps_values = eps_values;
      const RateReport r = run_size_sweep(cfg);
      const fs::path path = emit_report(r, g, "sizes");
      std::printf("sizes: %s\n", path.string().c_str());
      if (r.rows.size() >= 2) {
        std::printf("  log M vs log(1/eps'): %.4f\n  log M vs log(N+1):    %.4f\n", r.weights_vs_inv_eps_prime.slope,
                    r.weights_vs_N_plus_1.slope);
      }
      std::printf("  depth constant: %s\n", r.depth_constant ? "yes" : "no");
      return 0;
    }

    if (*partition_cmd) {
      const PartitionAudit audit = partition_check(PartitionSpec{a.d, partition_N, parse_variant(a.variant)}, partition_grid);
      const fs::path path = output_path(g, "partition.csv");
      write_text(path, partition_csv(audit));
      std::printf("partition sums: %s\n  max |sum - 1| = %.3g\n", path.string().c_str(), audit.max_deviation);
      return 0;
    }

    if (*taylor_cmd) {
      const RateReport r = run_taylor_rates(to_config(a, g), half_widths);
      const fs::path path = emit_report(r, g, "taylor_rates");
      std::printf("taylor rates for %s, m = %d: %s\n", a.target.c_str(), a.m, path.string().c_str());
      print_slopes(r);
      return 0;
    }

    if (*cal_cmd) {
      const Calibration cal = calibrate_constants(to_config(a, g), suite);
      const fs::path path = emit_report(cal.report, g, "calibrate");
      // Readable back through --config.
      std::ostringstream conf;
      conf << "# calibrated rate constant\n";
      for (const char* section : {"approximate", "sizes"}) conf << "[" << section << "]\nC = " << format_number(cal.C_hat) << "\n";
      const fs::path conf_path = output_path(g, "calibration.ini");
      write_text(conf_path, conf.str());
      std::printf("C_hat = %s\n", format_number(cal.C_hat).c_str());
      for (const auto& [name, spread] : cal.stability) std::printf("  %-12s max/min across N %.4f\n", name.c_str(), spread);
      std::printf("report: %s\nconfig: %s\n", path.string().c_str(), conf_path.string().c_str());
      return 0;
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "recu/assembler.hpp"
#include "recu/partition.hpp"
#include "recu/sobolev.hpp"

namespace recu {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit, natural-log units.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y). Needs at least two points with
/// positive coordinates; non-positive entries are skipped.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct ExperimentConfig {
  std::string target = "sin_sin";
  int d = 1;
  int m = 3;
  std::vector<int> N_values{2, 4, 8, 16};
  std::vector<double> eps_values;
  std::vector<NormSpec> norms;
  GridSpec grid{129, 129, GridRule::gauss_legendre};
  BumpVariant variant = BumpVariant::bspline;
  /// Bound n and k used by size sweeps and big-N.
  int n = 0;
  int k = 0;
  double B = 1.0;
  double C = 1.0;
  /// Also assemble the network and report its agreement with u_N.
  bool use_network = false;
  /// Fill the seconds column with wall-clock times; off keeps CSVs byte-stable.
  bool timing = false;
  bool allow_large = false;
  int quadrature_nodes = 32;
  std::uint64_t seed = 0;
};

void validate(const ExperimentConfig& cfg);

struct SweepRow {
  double sweep = 0.0;
  int N = 0;
  std::vector<double> errors;
  std::size_t depth = 0;
  std::size_t weights = 0;
  std::size_t neurons = 0;
  double seconds = 0.0;
};

struct RateReport {
  std::string experiment;
  std::string sweep_name;                  // "N" or "eps"
  std::vector<std::string> error_columns;  // one per measured quantity
  std::vector<SweepRow> rows;
  /// One fit per error column, error against the sweep's scale variable.
  std::vector<SlopeFit> slopes;
  /// Size sweeps: log M against log(1/eps') and against log(N+1).
  SlopeFit weights_vs_inv_eps_prime;
  SlopeFit weights_vs_N_plus_1;
  bool depth_constant = true;
  std::vector<std::string> notes;
};

/// For every N: u_N from averaged Taylor polynomials, the error
/// ||u - u_N|| for every NormSpec, and the architecture size. With
/// use_network an extra column "net_vs_uN" holds the largest
/// |R(Phi_P) - u_N| over 1000 seeded random points. Slopes are fitted
/// against 1/N, so decay rates come out positive.
RateReport run_rate_sweep(const ExperimentConfig& cfg);

/// For every eps: N from big-N and the size of the shared architecture.
RateReport run_size_sweep(const ExperimentConfig& cfg);

struct Calibration {
  double C_hat = 0.0;
  RateReport report;  // columns: per-target ratios err N^{m-n-k} / ||u||
  /// Per target, max/min of the ratio across N (1 for exact targets).
  std::vector<std::pair<std::string, double>> stability;
};

/// C_hat = max over targets and N of ||u - u_N|| N^{m-n-k} / ||u||_{W^{m,p}_{m,p}}
/// with the first NormSpec of the config. Throws ValidationError on an empty suite.
Calibration calibrate_constants(const ExperimentConfig& cfg, const std::vector<std::string>& suite);

struct PartitionAudit {
  RowMatrix points;          // (d+1) x P
  std::vector<double> sums;
  double max_deviation = 0.0;
};

/// Partition sum on a uniform grid with `grid` nodes per axis including the corners.
PartitionAudit partition_check(const PartitionSpec& spec, int grid);

/// Box-shrinkage rates for one target: rows of (diameter, seminorm) per spec.
RateReport run_taylor_rates(const ExperimentConfig& cfg, std::span<const double> half_widths);

enum class ReportFormat { csv, json };

/// CSV: sweep column, one column per error, then L, M, neurons, seconds.
std::string to_csv(const RateReport& report);
std::string to_json(const RateReport& report);
std::string partition_csv(const PartitionAudit& audit);

/// Writes the report, surfacing I/O failures with the path.
void emit(const RateReport& report, ReportFormat format, const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses the CSVs written by to_csv and partition_csv. Throws ParseError
/// with a "line N" location on malformed input.
CsvTable parse_csv(const std::string& text);

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

}  // namespace recu

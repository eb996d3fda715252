#include "recu/assembler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "recu/gadgets.hpp"
#include "recu/parallel.hpp"

namespace recu {

namespace {

Network selector(int dims, int axis) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, dims);
  a(0, axis) = 1.0;
  return affine_network(a, Eigen::VectorXd::Zero(1));
}

Interval times(const Interval& a, const Interval& b) {
  const double c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(std::begin(c), std::end(c)), *std::max_element(std::begin(c), std::end(c))};
}

void check_range(const Interval& v, double r, std::size_t level, std::size_t factor) {
  if (v.lo < -r || v.hi > r) {
    throw ConstructionError("factor " + std::to_string(factor) + " at product level " + std::to_string(level) +
                            " has range [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) +
                            "] outside the exact domain [-r, r] with r = " + std::to_string(r));
  }
}

// Everything a localized monomial needs except phi_mu itself is shared
// across cells, so build those pieces once per (spec, m).
struct MonomialParts {
  std::vector<Network> extractors;  // one per coordinate, depth 3
  Network one;                      // constant 1, depth 3
};

MonomialParts monomial_parts(const PartitionSpec& spec) {
  const int dims = spec.dims();
  MonomialParts parts{{}, extend_depth(gadgets::constant(dims, 1.0), 3, 1.0)};
  for (int l = 0; l < dims; ++l) {
    parts.extractors.push_back(extend_depth(concatenate(gadgets::monomial_extractor(), selector(dims, l)), 3, 1.0));
  }
  return parts;
}

Network localized_monomial(const PartitionSpec& spec, const MultiIndex& mu, const MultiIndex& exponent, int m,
                           const MonomialParts& parts) {
  if (static_cast<int>(exponent.size()) != spec.dims()) throw ShapeError("exponent must have d+1 entries");
  if (m < 1) throw ValidationError("Taylor order must be at least 1");
  for (int e : exponent) {
    if (e < 0) throw ValidationError("exponents must be non-negative");
  }
  if (total_degree(exponent) > m - 1) {
    throw ValidationError("monomial degree " + std::to_string(total_degree(exponent)) + " exceeds m - 1 = " +
                          std::to_string(m - 1));
  }
  std::vector<Network> factors;
  factors.push_back(phi_mu_network(spec, mu));
  for (int l = 0; l < spec.dims(); ++l) {
    for (int i = 0; i < exponent[static_cast<std::size_t>(l)]; ++i) factors.push_back(parts.extractors[static_cast<std::size_t>(l)]);
  }
  for (int i = total_degree(exponent); i < m - 1; ++i) factors.push_back(parts.one);
  return product_of_outputs(parallelize(factors), product_radius(m, spec.d));
}

Network assemble(const LocalPolynomials& polys, const PartitionSpec& spec, bool unit_coefficients) {
  validate(spec);
  if (polys.N != spec.N || polys.d != spec.d) throw ShapeError("polynomials do not match the partition");
  if (polys.polys.size() != spec.cell_count()) throw ValidationError("missing local polynomials for some cells");
  const MonomialParts parts = monomial_parts(spec);
  const std::vector<MultiIndex> basis = graded_indices(spec.dims(), polys.m - 1);
  const std::size_t per_cell = basis.size();
  const std::size_t total = polys.cells.size() * per_cell;

  std::vector<Network> subnets(total, Network(1, {Layer(SparseMatrix(1, 1), Eigen::VectorXd::Zero(1))}));
  Eigen::MatrixXd sum_row(1, static_cast<Eigen::Index>(total));
  parallel_for(polys.cells.size(), [&](std::size_t c) {
    const LocalPolynomial& p = polys.polys[c];
    if (p.exponents() != basis) throw ValidationError("local polynomial has an unexpected basis");
    for (std::size_t e = 0; e < per_cell; ++e) {
      const std::size_t idx = c * per_cell + e;
      subnets[idx] = localized_monomial(spec, polys.cells[c], basis[e], polys.m, parts);
      sum_row(0, static_cast<Eigen::Index>(idx)) = unit_coefficients ? 1.0 : p.coefficients()[e];
    }
  });
  for (Eigen::Index i = 0; i < sum_row.cols(); ++i) {
    if (!std::isfinite(sum_row(0, i))) throw ValidationError("non-finite polynomial coefficient");
  }
  return concatenate(affine_network(sum_row, Eigen::VectorXd::Zero(1)), parallelize(subnets));
}

}  // namespace

Network extend_depth(const Network& net, std::size_t depth, double radius) {
  if (net.depth() > depth) throw ShapeError("network is deeper than the requested depth");
  Network out = net;
  while (out.depth() < depth) out = concatenate(gadgets::identity(out.output_dim(), radius), out);
  return out;
}

int product_levels(int factors) {
  int levels = 0;
  for (int f = factors; f > 1; f = (f + 1) / 2) ++levels;
  return levels;
}

double product_radius(int m, int d) { return static_cast<double>((m + d) * (m + d) + 1); }

Network product_of_outputs(const Network& base, double r, std::span<const Interval> ranges) {
  if (!(r > 0.0)) throw ValidationError("product range must be positive");
  const auto outputs = static_cast<std::size_t>(base.output_dim());
  std::vector<Interval> current(outputs, Interval{0.0, 1.0});
  if (!ranges.empty()) {
    if (ranges.size() != outputs) throw ShapeError("one range per base output is required");
    current.assign(ranges.begin(), ranges.end());
  }
  if (outputs == 1) return base;

  Network net = base;
  std::size_t level = 0;
  while (current.size() > 1) {
    for (std::size_t i = 0; i < current.size(); ++i) check_range(current[i], r, level, i);
    std::vector<Network> blocks;
    std::vector<Interval> next;
    for (std::size_t i = 0; i + 1 < current.size(); i += 2) {
      blocks.push_back(gadgets::product(r));
      next.push_back(times(current[i], current[i + 1]));
    }
    if (current.size() % 2 == 1) {
      blocks.push_back(gadgets::identity(1, r));
      next.push_back(current.back());
    }
    net = concatenate(block_diagonal(blocks), net);
    current = std::move(next);
    ++level;
  }
  return net;
}

Network localized_monomial_network(const PartitionSpec& spec, const MultiIndex& mu, const MultiIndex& exponent, int m) {
  validate(spec);
  return localized_monomial(spec, mu, exponent, m, monomial_parts(spec));
}

Network assemble_P_network(const LocalPolynomials& polys, const PartitionSpec& spec) {
  return assemble(polys, spec, false);
}

namespace {

Network unit_assembly(const PartitionSpec& spec, int m) {
  validate(spec);
  LocalPolynomials unit;
  unit.d = spec.d;
  unit.m = m;
  unit.N = spec.N;
  unit.cells = box_indices(spec.dims(), spec.N);
  unit.polys.assign(unit.cells.size(), LocalPolynomial(spec.d, m));
  return assemble(unit, spec, true);
}

}  // namespace

ArchitectureMask assembly_mask(const PartitionSpec& spec, int m) { return architecture_of(unit_assembly(spec, m)); }

SizeAccount assembly_size(const PartitionSpec& spec, int m) { return size_account(unit_assembly(spec, m)); }

void validate(const ApproxConfig& cfg) {
  if (cfg.d < 1) throw ValidationError("d must be at least 1");
  if (cfg.n < 0 || cfg.n > 1 || cfg.k < 0 || cfg.k > 1) throw ValidationError("n and k must be 0 or 1");
  if (cfg.m < cfg.n + cfg.k + 1) {
    throw ValidationError("m = " + std::to_string(cfg.m) + " must be at least n + k + 1 = " + std::to_string(cfg.n + cfg.k + 1));
  }
  if (!(cfg.eps > 0.0 && cfg.eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
  if (!(cfg.B > 0.0) || !(cfg.C > 0.0)) throw ValidationError("B and C must be positive");
  if (!(cfg.p.value >= 1.0) || !(cfg.q.value >= 1.0)) throw ValidationError("exponents must lie in [1, inf]");
  if (!cfg.allow_large && (cfg.d > 2 || cfg.m > 4)) {
    throw ValidationError("d <= 2 and m <= 4 unless large runs are allowed");
  }
}

int big_N(const ApproxConfig& cfg) {
  validate(cfg);
  const double eps_prime = std::sqrt(cfg.eps);
  const double n = std::ceil(std::pow(eps_prime / (2.0 * cfg.C * cfg.B), -1.0 / (cfg.m - cfg.n - cfg.k)));
  if (!(n < 1e6)) throw ValidationError("eps too small: N would exceed 1e6");
  return std::max(1, static_cast<int>(n));
}

double target_norm(const JetOracle& u, int m, const Exponent& p, const GridSpec& grid) {
  return norm_of_oracle(u, NormSpec{m, p, m, p, NormMode::norm}, grid);
}

Approximation approximate(const JetOracle& u, const ApproxConfig& cfg) {
  validate(cfg);
  if (u.d() != cfg.d) throw ValidationError("target dimension does not match d");
  const auto start = std::chrono::steady_clock::now();
  AssemblyReport report;
  report.N = big_N(cfg);
  report.eps_prime = std::sqrt(cfg.eps);
  if (!cfg.allow_large && report.N > 16) {
    throw ValidationError("N = " + std::to_string(report.N) + " exceeds the guardrail of 16; allow large runs to proceed");
  }
  if (u.order() >= cfg.m) {
    report.target_norm = target_norm(u, cfg.m, cfg.p, GridSpec{33, 33, GridRule::gauss_legendre});
    if (report.target_norm > cfg.B) {
      report.norm_budget_exceeded = true;
      report.warnings.push_back("target norm " + std::to_string(report.target_norm) + " exceeds the budget B = " +
                                std::to_string(cfg.B));
    }
  } else {
    report.warnings.push_back("target has fewer than m derivatives; norm budget not checked");
  }

  const PartitionSpec spec{cfg.d, report.N, cfg.variant};
  LocalPolynomials polys = local_polynomials(u, cfg.m, report.N, cfg.d, cfg.quadrature_nodes);
  Network net = assemble_P_network(polys, spec);

  report.partition_size = size_account(phi_mu_network(spec, MultiIndex(static_cast<std::size_t>(spec.dims()), 0)));
  MultiIndex zero(static_cast<std::size_t>(spec.dims()), 0);
  report.monomial_size = size_account(localized_monomial_network(spec, zero, zero, cfg.m));
  report.total = size_account(net);
  report.subnetworks = polys.cells.size() * graded_indices(spec.dims(), cfg.m - 1).size();
  report.mask_entries = architecture_of(net).true_entries();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return Approximation{std::move(net), std::move(report), LocalizedApproximant(spec, std::move(polys))};
}

}  // namespace recu

#include <random>

#include <benchmark/benchmark.h>

#include "recu/assembler.hpp"
#include "recu/jet.hpp"
#include "recu/taylor.hpp"

using namespace recu;

namespace {

Network assembled(int N) {
  const PartitionSpec spec{1, N, BumpVariant::bspline};
  return assemble_P_network(local_polynomials(make_target("wave", 1), 3, N, 1), spec);
}

RowMatrix points(Eigen::Index count) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix p(2, count);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
  return p;
}

}  // namespace

static void BM_RealizeBatch(benchmark::State& state) {
  const Network net = assembled(static_cast<int>(state.range(0)));
  const RowMatrix pts = points(1024);
  for (auto _ : state) benchmark::DoNotOptimize(realize_batch(net, pts));
  state.SetItemsProcessed(state.iterations() * pts.cols());
  state.counters["weights"] = static_cast<double>(size_account(net).weights);
}
BENCHMARK(BM_RealizeBatch)->Arg(2)->Arg(4)->Arg(8);

static void BM_EvalJet(benchmark::State& state) {
  const Network net = assembled(static_cast<int>(state.range(0)));
  const double x[] = {0.37};
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet(net, 0.61, x));
}
BENCHMARK(BM_EvalJet)->Arg(2)->Arg(4)->Arg(8);

static void BM_EvalJetBatch(benchmark::State& state) {
  const Network net = assembled(4);
  const RowMatrix pts = points(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet_batch(net, pts));
  state.SetItemsProcessed(state.iterations() * pts.cols());
}
BENCHMARK(BM_EvalJetBatch)->Arg(64)->Arg(1024);

static void BM_AveragedTaylor(benchmark::State& state) {
  const JetOracle u = make_target("sin_sin", 1);
  const CutoffSpec ball = cell_ball(1, 4, {2, 2});
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(averaged_taylor(u, m, ball));
}
BENCHMARK(BM_AveragedTaylor)->DenseRange(2, 4);

static void BM_LocalPolynomials(benchmark::State& state) {
  const JetOracle u = make_target("wave", 1);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(local_polynomials(u, 3, N, 1));
}
BENCHMARK(BM_LocalPolynomials)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Assembly(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const PartitionSpec spec{1, N, BumpVariant::bspline};
  const LocalPolynomials polys = local_polynomials(make_target("wave", 1), 3, N, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_P_network(polys, spec));
}
BENCHMARK(BM_Assembly)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <random>

#include <benchmark/benchmark.h>

#include "ctmc/matrix_exp.hpp"
#include "ctmc/monte_carlo.hpp"
#include "ctmc/path.hpp"
#include "ctmc/pricing.hpp"
#include "ctmc/recovery.hpp"
#include "ctmc/replication.hpp"

namespace {

using namespace ctmc;

Model bench_model(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> off(0.05, 2.0);
  std::uniform_real_distribution<double> rate(0.0, 0.2);
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vector r(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j) g(i, j) = off(rng);
    }
    g(i, i) = -g.row(i).sum();
    r(i) = rate(rng);
  }
  return Model(StateSpace(n), std::move(g), std::move(r));
}

void BM_MatrixExponential(benchmark::State& state) {
  const Model m = bench_model(static_cast<std::size_t>(state.range(0)));
  const Matrix a = 5.0 * m.discounted_generator();
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential(a));
}
BENCHMARK(BM_MatrixExponential)->Arg(2)->Arg(10)->Arg(50);

void BM_BondCurve(benchmark::State& state) {
  const Model m = bench_model(static_cast<std::size_t>(state.range(0)));
  std::vector<double> maturities;
  for (int k = 1; k <= 500; ++k) maturities.push_back(0.1 * k);
  for (auto _ : state) benchmark::DoNotOptimize(bond_curve(m, 0.0, maturities));
}
BENCHMARK(BM_BondCurve)->Arg(2)->Arg(10);

void BM_SimulatePath(benchmark::State& state) {
  const Model m = bench_model(5);
  const JumpSampler sampler(m.generator());
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(sampler, 0, 10.0, rng));
}
BENCHMARK(BM_SimulatePath);

void BM_McPrice(benchmark::State& state) {
  const Model m = bench_model(5);
  const Vector phi = Vector::LinSpaced(5, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_price_claim(m, phi, 0, 1.0, {100000, 7, 0}));
  }
}
BENCHMARK(BM_McPrice)->Unit(benchmark::kMillisecond);

void BM_PerronPair(benchmark::State& state) {
  const Model m = bench_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(perron_pair(m));
}
BENCHMARK(BM_PerronPair)->Arg(2)->Arg(10)->Arg(50);

void BM_ReplicatePath(benchmark::State& state) {
  const Model m = bench_model(2);
  const ChainPath path = simulate_path(m.generator(), 0, 1.0, 3);
  const ClaimPayoff claim{Vector{{1.0, 0.0}}, 1.0};
  const BondBasis basis({2.0}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(replicate_on_path(m, path, claim, basis, 1e-3));
}
BENCHMARK(BM_ReplicatePath)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

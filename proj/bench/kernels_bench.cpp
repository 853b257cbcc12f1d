// OpenMP kernels against their serial references on a DGP1 panel
// (n = 1500, d = 80 unless noted). Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "gbvar/bootstrap.hpp"
#include "gbvar/lasso.hpp"
#include "gbvar/moments.hpp"
#include "gbvar/simulator.hpp"
#include "gbvar/sparse.hpp"

using namespace gbvar;

namespace {

struct Fixture {
  BinaryPanel panel;
  LagCovariances cov;
  LassoConfig lasso;
  PostSelectionFit fit;
  SecondOrderResiduals residuals;
  RootProjection projection;
  Matrix multipliers;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    SimConfig cfg;
    cfg.n = 1500;
    cfg.seed = 1;
    out.panel = simulate(dgp_preset("dgp1", 80), cfg);
    out.cov = sample_moments(out.panel);
    out.lasso.lambda = 6.14e-6;
    out.fit = post_select_fit(out.cov, out.lasso, 0.131);
    out.residuals = second_order_residuals(out.panel, out.fit.estimate);
    out.projection = root_projection(out.residuals, out.fit, out.cov);
    out.multipliers = MultiplierSampler(out.panel.n, 2.333, gaussian_kernel()).draw_batch(7, 0, 200);
    return out;
  }();
  return f;
}

void BM_LassoRowsSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(lasso_rows_serial(f.cov, f.lasso));
}

void BM_LassoRowsParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(lasso_rows(f.cov, f.lasso));
}

void BM_PostSelectSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(post_select_fit_serial(f.cov, f.lasso, 0.131));
}

void BM_PostSelectParallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(post_select_fit(f.cov, f.lasso, 0.131));
}

// The reference refits every row per replicate, so it runs on fewer columns.
void BM_BootstrapRootsReference(benchmark::State& state) {
  const auto& f = fixture();
  const Matrix e = f.multipliers.leftCols(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_roots_reference(f.residuals, f.fit, f.cov, e, f.projection.entries));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapRootsParallel(benchmark::State& state) {
  const auto& f = fixture();
  const Matrix e = f.multipliers.leftCols(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_roots(f.projection, e));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MultiplierFactor(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(MultiplierSampler(state.range(0), 2.333, gaussian_kernel()));
}

}  // namespace

BENCHMARK(BM_LassoRowsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LassoRowsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PostSelectSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PostSelectParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapRootsReference)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BootstrapRootsParallel)->Arg(10)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplierFactor)->Arg(600)->Arg(1500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

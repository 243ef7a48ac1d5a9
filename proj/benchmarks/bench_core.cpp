#include <benchmark/benchmark.h>

#include "lsxgc/connectivity.hpp"
#include "lsxgc/linalg.hpp"
#include "lsxgc/mvpa.hpp"
#include "lsxgc/rng.hpp"
#include "lsxgc/synth.hpp"

using namespace lsxgc;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (double& v : m.storage()) v = rng.next_gaussian();
    return m;
}

TimeSeriesEnsemble bench_ensemble(std::size_t n, std::size_t t) {
    const VarModel model = gen_var_model(n, 2, 0.15, 42);
    return simulate(model, t, 7);
}

} // namespace

static void BM_PcaFit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const TimeSeriesEnsemble e{random_matrix(n, 400, 1), default_roi_names(n)};
    for (auto _ : state) {
        auto pca = pca_fit(e, n / 2);
        benchmark::DoNotOptimize(pca.components);
    }
}
BENCHMARK(BM_PcaFit)->Arg(15)->Arg(60)->Unit(benchmark::kMicrosecond);

static void BM_LeastSquaresAffine(benchmark::State& state) {
    const Matrix design = random_matrix(36, 396, 2);
    const Matrix targets = random_matrix(15, 396, 3);
    for (auto _ : state) {
        auto fit = least_squares_affine(design, targets, 1e-8);
        benchmark::DoNotOptimize(fit.residuals);
    }
}
BENCHMARK(BM_LeastSquaresAffine)->Unit(benchmark::kMicrosecond);

static void BM_LsxgcMatrix(benchmark::State& state) {
    const TimeSeriesEnsemble e = bench_ensemble(15, 400);
    LsxgcConfig cfg;
    cfg.components = 8;
    cfg.lags = 4;
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto conn = lsxgc_matrix(e, cfg, threads);
        benchmark::DoNotOptimize(conn.values);
    }
}
BENCHMARK(BM_LsxgcMatrix)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_CrossCorrelation(benchmark::State& state) {
    const TimeSeriesEnsemble e = bench_ensemble(15, 400);
    for (auto _ : state) {
        auto conn = cross_correlation_matrix(e);
        benchmark::DoNotOptimize(conn.values);
    }
}
BENCHMARK(BM_CrossCorrelation)->Unit(benchmark::kMicrosecond);

static void BM_KendallTau(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.next_gaussian();
        y[i] = static_cast<double>(rng.next_below(2));
    }
    for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_b(x, y));
}
BENCHMARK(BM_KendallTau)->Arg(126)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_LssvmTrain(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const Matrix x = random_matrix(113, k, 9);
    std::vector<int> labels(113);
    for (std::size_t i = 0; i < 113; ++i) labels[i] = i % 2 == 0 ? 0 : 1;
    for (auto _ : state) {
        auto model = lssvm_train(x, labels, 1.0);
        benchmark::DoNotOptimize(model.alpha);
    }
}
BENCHMARK(BM_LssvmTrain)->Arg(25)->Arg(175)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
    const VarModel model = gen_var_model(15, 2, 0.15, 3);
    for (auto _ : state) {
        auto e = simulate(model, 400, 11);
        benchmark::DoNotOptimize(e.data);
    }
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

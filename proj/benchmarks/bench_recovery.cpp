#include <benchmark/benchmark.h>

#include "fdrec/estimator.hpp"
#include "fdrec/experiments.hpp"
#include "fdrec/factor_count.hpp"
#include "fdrec/presets.hpp"
#include "fdrec/simulation.hpp"
#include "fdrec/smoother.hpp"

using namespace fdrec;

namespace {

void BM_Simulate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SimConfig cfg = presets::three_factor_ar(n, n);
    for (auto _ : state) {
        const GroundTruth truth = simulate(cfg);
        benchmark::DoNotOptimize(truth.observed.values().data());
    }
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(200)->Arg(400);

void BM_GramEigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroundTruth truth = simulate(presets::three_factor_ar(n, n));
    for (auto _ : state) {
        const EigenSystem es = gram_eigen(truth.observed);
        benchmark::DoNotOptimize(es.eigenvalues.data());
    }
}
BENCHMARK(BM_GramEigen)->Arg(100)->Arg(200)->Arg(400);

void BM_Recover(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroundTruth truth = simulate(presets::three_factor_ar(n, n));
    for (auto _ : state) {
        const auto [fit, es] = recover(truth.observed, 3);
        benchmark::DoNotOptimize(fit.recovered.values().data());
    }
}
BENCHMARK(BM_Recover)->Arg(100)->Arg(200)->Arg(400);

void BM_EigenvalueRatio(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroundTruth truth = simulate(presets::three_factor_ar(n, n));
    const EigenSystem es = gram_eigen(truth.observed);
    const int k_max = default_k_max(n, n);
    for (auto _ : state) {
        const FactorCountResult result = eigenvalue_ratio(es, k_max);
        benchmark::DoNotOptimize(result.chosen);
    }
}
BENCHMARK(BM_EigenvalueRatio)->Arg(200);

void BM_SmoothCurveAuto(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const GroundTruth truth = simulate(presets::rough_brownian(4, p));
    const Eigen::VectorXd y = truth.observed.values().row(0);
    const SmootherConfig cfg;  // auto bandwidth: LOOCV over 20 candidates
    for (auto _ : state) {
        const Eigen::VectorXd fitted = smooth_curve(y, truth.observed.grid(), cfg);
        benchmark::DoNotOptimize(fitted.data());
    }
}
BENCHMARK(BM_SmoothCurveAuto)->Arg(100)->Arg(200);

void BM_AcfDrift(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroundTruth truth = simulate(presets::three_factor_ar(n, n));
    const auto [fit, es] = recover(truth.observed, 3);
    for (auto _ : state) {
        const double drift = acf_drift(fit.recovered.values(), truth.signal.values(), 20, 1);
        benchmark::DoNotOptimize(drift);
    }
}
BENCHMARK(BM_AcfDrift)->Arg(400);

}  // namespace

BENCHMARK_MAIN();

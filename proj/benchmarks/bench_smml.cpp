#include "smml/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace smml;

namespace {

const Model& normal() {
    static const Model m(make_normal_normal(2.0));
    return m;
}

const Model& lomax() {
    static const Model m(make_exponential_gamma(2.0, 1.0));
    return m;
}

void BM_IntervalCentral(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(interval_integrals(normal().marginal(), -1.92, 1.92));
}
BENCHMARK(BM_IntervalCentral);

void BM_IntervalFarTail(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(interval_integrals(normal().marginal(), 93.45, INFINITY));
}
BENCHMARK(BM_IntervalFarTail);

void BM_IntervalLomaxTail(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(interval_integrals(lomax().marginal(), 403274.23, INFINITY));
}
BENCHMARK(BM_IntervalLomaxTail);

void BM_CodebookAndJacobian(benchmark::State& state) {
    const CutPointVector a({-10.884, -5.9797, -1.9203, 1.9203, 5.9797, 10.884});
    for (auto _ : state) {
        const auto book = codebook_from_cutpoints(normal(), a);
        benchmark::DoNotOptimize(gradient_G(normal(), book));
        benchmark::DoNotOptimize(jacobian_G(normal(), book));
    }
}
BENCHMARK(BM_CodebookAndJacobian);

void BM_NewtonNormal(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CutPointVector start(quantile_start(normal(), n));
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(normal(), start));
}
BENCHMARK(BM_NewtonNormal)->Arg(2)->Arg(6)->Arg(16);

void BM_SweepLomax(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(sweep_solve(lomax(), 1, 5));
}
BENCHMARK(BM_SweepLomax)->Unit(benchmark::kMillisecond);

void BM_SweepNormal(benchmark::State& state) {
    SolveOptions opts;
    opts.threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_solve(normal(), 1, 16, opts));
}
BENCHMARK(BM_SweepNormal)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "mvdrift/particle_scheme.hpp"
#include "mvdrift/path.hpp"
#include "mvdrift/random.hpp"

using namespace mvdrift;

static void BM_NormalStream(benchmark::State& state) {
    NormalStream stream(StreamKey{1, StreamDomain::outer, 0, 0});
    for (auto _ : state) benchmark::DoNotOptimize(stream.next());
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NormalStream);

static void BM_OuterPath(benchmark::State& state) {
    const auto params = default_market();
    const GridSpec grid{static_cast<std::size_t>(state.range(0)), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(simulate_outer_path(params, grid, outer_stream(3)));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OuterPath)->Arg(100)->Arg(1000);

static void BM_Branch(benchmark::State& state) {
    const auto params = default_market();
    const GridSpec grid{static_cast<std::size_t>(state.range(0)), 1.0};
    std::uint32_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_branch(params, grid, 0, params.pi0, 0.0, branch_stream(5, 0, i++)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Branch)->Arg(100)->Arg(1000);

static void BM_EvaluateNode(benchmark::State& state) {
    const auto params = default_market();
    const GridSpec grid{1000, 1.0};
    const auto outer = simulate_outer_path(params, grid, outer_stream(7));
    const auto coeffs = compute_c1_c2(estimate_rho_moments(params, grid, 2000, 7), params);
    const EnsembleSpec spec{static_cast<std::size_t>(state.range(0)), 7, 1};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_node(params, grid, outer, 0, spec, coeffs));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_EvaluateNode)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

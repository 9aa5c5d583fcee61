#include <benchmark/benchmark.h>

#include "ouspread/lattice.hpp"
#include "ouspread/simulate.hpp"
#include "ouspread/value_surface.hpp"

using namespace ouspread;

static void BM_SolveExitLong(benchmark::State& state) {
    const auto p = OUParams::reference();
    const TimeGrid grid(1.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_exit_long(p, grid));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveExitLong)->Arg(125)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_SolveLongShort(benchmark::State& state) {
    const auto p = OUParams::reference();
    const TimeGrid grid(1.0, 500);
    for (auto _ : state) benchmark::DoNotOptimize(solve_strategy(p, grid, Strategy::LongShort));
}
BENCHMARK(BM_SolveLongShort)->Unit(benchmark::kMillisecond);

static void BM_EvaluateEntryValue(benchmark::State& state) {
    const auto p = OUParams::reference();
    const auto sol = solve_strategy(p, TimeGrid(1.0, 500), Strategy::LongShort);
    const ValueEvaluator v(sol);
    double x = -0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v.entry_long(0.0, x));
        x += 1e-6;
    }
}
BENCHMARK(BM_EvaluateEntryValue)->Unit(benchmark::kMicrosecond);

static void BM_LatticeExitLong(benchmark::State& state) {
    const auto p = OUParams::reference();
    const auto spec = LatticeSpec::covering(p, static_cast<std::size_t>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(dp_value(p, spec, Role::ExitLong));
}
BENCHMARK(BM_LatticeExitLong)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SimulateLongShort(benchmark::State& state) {
    const auto p = OUParams::reference();
    const auto sol = solve_strategy(p, TimeGrid(1.0, 500), Strategy::LongShort);
    SimOptions o;
    o.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_strategy(sol, 1000, 42, o));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateLongShort)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include "ouspread/kernels.hpp"

using namespace ouspread;

static void BM_TruncatedMoments(benchmark::State& state) {
    const auto p = OUParams::reference();
    double z = -0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(truncated_moments(p, 0.01, 0.02, z, Side::Above));
        z += 1e-7;
    }
}
BENCHMARK(BM_TruncatedMoments);

static void BM_ExitKernel(benchmark::State& state) {
    const auto p = OUParams::reference();
    const auto kind = KernelKind::exit_long();
    double x = -0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel(kind, p, 0.0, 0.01, x, 0.04));
        x += 1e-7;
    }
}
BENCHMARK(BM_ExitKernel);

// precomputed step law, as the solver's inner loop uses it
static void BM_ExitKernelStepLaw(benchmark::State& state) {
    const auto p = OUParams::reference();
    const auto kind = KernelKind::exit_long();
    const auto law = step_law(p, 0.01);
    double x = -0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel(kind, p, law, x, 0.04, 0.0));
        x += 1e-7;
    }
}
BENCHMARK(BM_ExitKernelStepLaw);

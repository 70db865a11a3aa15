#include <benchmark/benchmark.h>

#include "vvlab/cutoff.hpp"

using namespace vvlab;

static void Cutoff_DiskEval(benchmark::State& state) {
    DomainSpec disk{2, Shape::disk, 1, 1, 1};
    auto c = build_cutoff(disk, 1.0 / 3.0, 64.0);
    const Vec2 x{63.2, 4.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.value(x));
        benchmark::DoNotOptimize(c.grad(x));
        benchmark::DoNotOptimize(c.hess(x));
    }
}
BENCHMARK(Cutoff_DiskEval);

static void Cutoff_EllipseEval(benchmark::State& state) {
    DomainSpec ell{2, Shape::ellipse, 1.0, 0.5, 1};
    auto c = build_cutoff(ell, 1.0, 32.0);
    const Vec2 x{30.9, 2.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.value(x));
        benchmark::DoNotOptimize(c.grad(x));
    }
}
BENCHMARK(Cutoff_EllipseEval);

static void Cutoff_EllipseChartInverse(benchmark::State& state) {
    DomainSpec ell{2, Shape::ellipse, 1.0, 0.5, 1};
    ell.R = 32.0;
    TubularChart chart(ell, 1.0);
    const Vec2 x{30.9, 2.0};
    double s, r;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chart.to_chart(x, s, r));
    }
}
BENCHMARK(Cutoff_EllipseChartInverse);

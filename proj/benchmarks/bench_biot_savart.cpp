#include <benchmark/benchmark.h>

#include "vvlab/biot_savart.hpp"

using namespace vvlab;

static void BS_VelocityAnalytic(benchmark::State& state) {
    auto cv = CompactVorticity::from_flow(flow_by_name("smooth-II").flow2d);
    Vec2 x{1.7, -0.4};
    for (auto _ : state) {
        auto u = velocity_2d(cv, x);
        benchmark::DoNotOptimize(u);
        x.x = x.x == 1.7 ? 1.71 : 1.7;
    }
}
BENCHMARK(BS_VelocityAnalytic);

static void BS_VelocityQuadrature(benchmark::State& state) {
    auto cv = CompactVorticity::from_flow(flow_by_name("smooth-II").flow2d);
    KernelQuadrature q;
    q.radial_panels = static_cast<int>(state.range(0));
    q.angular_nodes = 4 * q.radial_panels;
    const Vec2 x{1.7, -0.4};
    for (auto _ : state) {
        auto u = velocity_2d(cv, x, q, true);
        benchmark::DoNotOptimize(u);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BS_VelocityQuadrature)->RangeMultiplier(2)->Range(16, 128)->Complexity();

static void BS_HillVelocity(benchmark::State& state) {
    const auto& hill = *flow_by_name("hill-III").flow3d;
    Vec3 x{0.4, 0.2, 0.7};
    for (auto _ : state) {
        auto u = hill.velocity(x);
        benchmark::DoNotOptimize(u);
    }
}
BENCHMARK(BS_HillVelocity);

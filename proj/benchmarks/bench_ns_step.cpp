#include <benchmark/benchmark.h>

#include "vvlab/ns_disk.hpp"

using namespace vvlab;

static void NS_SolveCell(benchmark::State& state) {
    const auto& pr = *flow_by_name("smooth-II").flow2d->primary().profile;
    RadialNSProblem prob;
    prob.R = 729.0;
    prob.nu = 1e-4;
    prob.T = 1.0;
    prob.u0 = [&pr](double rho) { return pr.u_theta(rho); };
    prob.breakpoints = pr.breakpoints();
    prob.core_radius = 1.0;
    prob.base_nodes = 1024;
    prob.steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto sol = solve_radial_ns(prob);
        benchmark::DoNotOptimize(sol.energy.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(NS_SolveCell)->RangeMultiplier(2)->Range(64, 512)->Complexity();

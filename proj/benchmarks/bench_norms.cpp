#include <benchmark/benchmark.h>

#include "vvlab/norms.hpp"
#include "vvlab/truncation.hpp"

using namespace vvlab;

static void Norm_CollarTruncationError(benchmark::State& state) {
    DomainSpec disk{2, Shape::disk, 1, 1, 1};
    const double R = state.range(0);
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(disk, 1.0, R));
    auto tf = truncate_2d(flow_by_name("patch-I-off").flow2d, cutoff, {});
    for (auto _ : state) {
        auto rep = norm_collar_2d([&](Vec2 x) { return tf.diff(x).norm(); },
                                  cutoff->chart(), NormKind::L2);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(Norm_CollarTruncationError)->Arg(16)->Arg(64);

static void Norm_RadialSweepPoint(benchmark::State& state) {
    DomainSpec disk{2, Shape::disk, 1, 1, 1};
    auto cutoff = std::make_shared<CutoffFunction>(build_cutoff(disk, 1.0 / 3.0, 729.0));
    auto tf = truncate_2d(flow_by_name("patch-II").flow2d, cutoff, {});
    const double w = cutoff->collar_width();
    std::vector<double> bp{729.0 - 0.5 * w};
    for (auto _ : state) {
        auto rep = norm_radial_2d([&](double r) { return std::abs(tf.diff_radial(r)); },
                                  729.0 - w, 729.0, bp, NormKind::L2);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(Norm_RadialSweepPoint);

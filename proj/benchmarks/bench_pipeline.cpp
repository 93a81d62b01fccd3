#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>

#include "eqy/blowup.hpp"
#include "eqy/geom.hpp"
#include "eqy/groups.hpp"
#include "eqy/levelset.hpp"
#include "eqy/quotient.hpp"

namespace {

using eqy::geom::ClosedModelMetric;
using eqy::geom::RadialMetric;
using eqy::groups::FiniteGroupAction;
using eqy::groups::Vec4;

void BM_GreensProfileBuild(benchmark::State& state) {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    for (auto _ : state) {
        auto profile = eqy::blowup::greens_round(sphere, Vec4(1, 0, 0, 0));
        benchmark::DoNotOptimize(profile.value(1.0));
    }
}
BENCHMARK(BM_GreensProfileBuild)->Unit(benchmark::kMillisecond);

void BM_AveragedGreenEval(benchmark::State& state) {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    const Vec4 pole(1, 0, 0, 0);
    const auto avg = eqy::blowup::averaged_green(
        FiniteGroupAction::lens(static_cast<int>(state.range(0))),
        eqy::blowup::greens_round(sphere, pole), pole);
    const Vec4 x(0.2, -0.4, 0.8, std::sqrt(1.0 - 0.04 - 0.16 - 0.64));
    for (auto _ : state)
        benchmark::DoNotOptimize(avg.value(x));
}
BENCHMARK(BM_AveragedGreenEval)->Arg(2)->Arg(5);

void BM_BlowupBuild(benchmark::State& state) {
    const auto sphere = ClosedModelMetric::round_sphere(1.0);
    const auto action = FiniteGroupAction::lens(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto model = eqy::blowup::build_blowup(sphere, action, Vec4(1, 0, 0, 0));
        benchmark::DoNotOptimize(model.ends.size());
    }
}
BENCHMARK(BM_BlowupBuild)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LevelScan(benchmark::State& state) {
    const auto sol =
        eqy::levelset::solve_harmonic_radial(RadialMetric::schwarzschild(2.0));
    const auto grid =
        eqy::levelset::uniform_levels(8.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto scan = eqy::levelset::scan_levels(sol, grid);
        benchmark::DoNotOptimize(scan.samples.back().W);
    }
}
BENCHMARK(BM_LevelScan)->Arg(101)->Arg(321)->Arg(1001)->Unit(benchmark::kMicrosecond);

void BM_ModelProfileBuild(benchmark::State& state) {
    for (auto _ : state) {
        auto f = eqy::quotient::ModelProfileF::rp3_model(
            1.0, static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(f.f0());
    }
}
BENCHMARK(BM_ModelProfileBuild)->Arg(513)->Arg(2049)->Unit(benchmark::kMillisecond);

void BM_GridSolve(benchmark::State& state) {
    const auto end = RadialMetric::schwarzschild(2.0);
    eqy::levelset::GridOptions opt;
    opt.n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto grid = eqy::levelset::solve_harmonic_grid3d(end, opt);
        benchmark::DoNotOptimize(grid.info.iterations);
    }
}
BENCHMARK(BM_GridSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <cmath>
#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "fracqm/curve_geometry.hpp"
#include "fracqm/falpha_calculus.hpp"
#include "fracqm/fractal_measure.hpp"
#include "fracqm/probability_flow.hpp"
#include "fracqm/quantum_dynamics.hpp"

using namespace fracqm;

namespace {

const double kKoch = std::log(4.0) / std::log(3.0);

std::shared_ptr<const Staircase> koch_chart(int level) {
    return std::make_shared<const Staircase>(build_staircase(build_koch(level), kKoch, 0.0));
}

}  // namespace

static void BM_BuildKoch(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_koch(level));
    state.SetComplexityN(1 << (2 * level));
}
BENCHMARK(BM_BuildKoch)->DenseRange(4, 8, 2)->Complexity(benchmark::oN);

static void BM_GammaPremeasure(benchmark::State& state) {
    const auto g = build_koch(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gamma_premeasure(g, kKoch).value);
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * g.segment_count()));
}
BENCHMARK(BM_GammaPremeasure)->DenseRange(4, 8, 2);

static void BM_DimensionEstimate(benchmark::State& state) {
    std::vector<CurveGrid> grids;
    for (int l = 2; l <= 7; ++l) grids.push_back(build_koch(l));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_gamma_dimension(grids).alpha_star);
}
BENCHMARK(BM_DimensionEstimate)->Unit(benchmark::kMillisecond);

static void BM_Staircase(benchmark::State& state) {
    const auto g = build_koch(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_staircase(g, kKoch, 0.0));
}
BENCHMARK(BM_Staircase)->DenseRange(4, 8, 2);

static void BM_Laplacian(benchmark::State& state) {
    const auto c = koch_chart(static_cast<int>(state.range(0)));
    const auto f = ComplexField::from_function(c, [](double, double s) { return Complex(std::sin(3 * s), s); });
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(f));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * f.size()));
}
BENCHMARK(BM_Laplacian)->DenseRange(4, 8, 2);

static void BM_CrankNicolsonStep(benchmark::State& state) {
    const auto c = koch_chart(6);
    const auto psi = gaussian_packet(c, 0.5 * c->back(), c->span() / 16, 5.0);
    const auto boundary = state.range(1) ? Boundary::periodic : Boundary::dirichlet;
    Evolver ev(psi, nullptr, 1e-4, {boundary, static_cast<std::size_t>(state.range(0))});
    for (auto _ : state) ev.step();
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * state.range(0)));
}
BENCHMARK(BM_CrankNicolsonStep)->ArgsProduct({{512, 2048, 8192}, {0, 1}});

static void BM_KernelMoments(benchmark::State& state) {
    const KernelStep step{1e-3, 1e-4};
    for (auto _ : state) benchmark::DoNotOptimize(kernel_moments(step).m2);
}
BENCHMARK(BM_KernelMoments)->Unit(benchmark::kMillisecond);

static void BM_ContinuityResidual(benchmark::State& state) {
    const auto c = koch_chart(6);
    const auto psi = gaussian_packet(c, 0.5 * c->back(), c->span() / 16, 5.0);
    Evolver ev(psi, nullptr, 1e-4);
    const auto a = ev.snapshot();
    ev.step();
    const auto b = ev.snapshot();
    ev.step();
    const auto d = ev.snapshot();
    for (auto _ : state) benchmark::DoNotOptimize(continuity_residual(a, b, d));
}
BENCHMARK(BM_ContinuityResidual);

BENCHMARK_MAIN();

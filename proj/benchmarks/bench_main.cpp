#include "efm/alignment.hpp"
#include "efm/geometry.hpp"
#include "efm/simulation.hpp"
#include "efm/sliced_distance.hpp"
#include "efm/trend_filter.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

constexpr double kPi = std::numbers::pi;

efm::Func1D curve(std::size_t n, double p) {
    efm::Func1D f;
    f.y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n - 1);
        f.y[k] = std::sin(2.0 * kPi * std::pow(t, p)) + 0.3 * std::cos(5.0 * t);
    }
    return f;
}

void BM_Wendland(benchmark::State& state) {
    double d = 0.0;
    for (auto _ : state) {
        d += 17.0;
        if (d > 750.0) d -= 750.0;
        benchmark::DoNotOptimize(efm::wendland(d, 750.0));
    }
}
BENCHMARK(BM_Wendland);

void BM_Align(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const efm::Func1D f = curve(n, 1.0);
    const efm::Func1D g = curve(n, 1.4);
    for (auto _ : state) benchmark::DoNotOptimize(efm::align(f, g));
}
BENCHMARK(BM_Align)->Arg(64)->Arg(128)->Arg(365);

void BM_SliceField(benchmark::State& state) {
    const efm::Field f = efm::synthetic_base_field(36, 72, 365, 0);
    const auto centers = efm::SliceLocationSet::from_grid(f.grid());
    const efm::KernelConfig kcfg{static_cast<double>(state.range(0)), true};
    for (auto _ : state)
        benchmark::DoNotOptimize(efm::slice_field(f, centers, kcfg, 1));
}
BENCHMARK(BM_SliceField)->Arg(750)->Arg(2500)->Unit(benchmark::kMillisecond);

void BM_TrendFilter(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss(0.0, 0.3);
    std::vector<double> y(365);
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double t = static_cast<double>(k) / 364.0;
        y[k] = 4.0 + 2.0 * std::sin(2.0 * kPi * t) + gauss(rng);
    }
    const efm::SmootherConfig cfg{1250.0, 5000, 1e-6};
    for (auto _ : state) benchmark::DoNotOptimize(efm::trend_filter(y, cfg));
}
BENCHMARK(BM_TrendFilter)->Unit(benchmark::kMillisecond);

void BM_SlicedDistance(benchmark::State& state) {
    const efm::Field f = efm::synthetic_base_field(12, 24, 96, 0);
    const efm::Field g = efm::apply_modification(f, {1, 2});
    const auto centers = efm::SliceLocationSet::from_grid(f.grid());
    for (auto _ : state)
        benchmark::DoNotOptimize(
            efm::sliced_elastic_distance(f, g, centers, {2500.0, true}, {}, 4));
}
BENCHMARK(BM_SlicedDistance)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

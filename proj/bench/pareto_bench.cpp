// SPDX-License-Identifier: Apache-2.0
// Parallel vs serial non-dominated scan over random objective vectors.

#include "drastic/pareto.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace {

// Loosely correlated: higher quality tends to cost bitrate, lower time costs quality.
std::vector<drastic::ObjectivePoint> make_points(std::size_t n) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<drastic::ObjectivePoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = 30 + 14 * u(rng);
        const double t = 50 + 1000 * u(rng) * (q - 28) / 16;
        const double r = 100 * std::exp((q - 30) / 5) * (0.7 + 0.6 * u(rng));
        pts.push_back({"S" + std::to_string(i + 1), q, t, r});
    }
    return pts;
}

void BM_ParetoParallel(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(drastic::pareto_front(pts));
    state.SetComplexityN(state.range(0));
}

void BM_ParetoSerial(benchmark::State& state) {
    const auto pts = make_points(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(drastic::pareto_front_serial(pts));
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_ParetoParallel)->RangeMultiplier(4)->Range(128, 8192)->Complexity()->UseRealTime();
BENCHMARK(BM_ParetoSerial)->RangeMultiplier(4)->Range(128, 8192)->Complexity()->UseRealTime();

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "topoloss/topoloss.hpp"

using namespace topoloss;

namespace {

PointCloud noisy_circle(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.5);
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({30.0 * std::cos(t) + jitter(rng), 30.0 * std::sin(t) + jitter(rng)});
    }
    return PointCloud(std::move(pts));
}

PersistenceDiagram random_diagram(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> birth(0.0, 10.0), life(0.1, 10.0);
    std::vector<PersistencePair> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        const double b = birth(rng);
        pairs.push_back({b, b + life(rng)});
    }
    return PersistenceDiagram(1, std::move(pairs));
}

void BM_RipsDegree0(benchmark::State& state) {
    const auto cloud = noisy_circle(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(rips_diagram(cloud, 0));
}
BENCHMARK(BM_RipsDegree0)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RipsDegree1(benchmark::State& state) {
    const auto cloud = noisy_circle(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(rips_diagram(cloud, 1));
}
BENCHMARK(BM_RipsDegree1)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Assignment(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> entry(0.0, 100.0);
    CostMatrix cost(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) cost(r, c) = entry(rng);
    for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
}
BENCHMARK(BM_Assignment)->Arg(32)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Wasserstein(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_diagram(n, 4), b = random_diagram(n, 5);
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein(a, b));
}
BENCHMARK(BM_Wasserstein)->Arg(16)->Arg(64)->Arg(127)->Unit(benchmark::kMillisecond);

void BM_Bottleneck(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_diagram(n, 6), b = random_diagram(n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(bottleneck(a, b));
}
BENCHMARK(BM_Bottleneck)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TopoWeight(benchmark::State& state) {
    const auto scene = generate_scene({64, 64, Scenario::Mixed, 11, 0.3});
    for (auto _ : state) benchmark::DoNotOptimize(topo_weight(scene.gt, scene.image));
}
BENCHMARK(BM_TopoWeight)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

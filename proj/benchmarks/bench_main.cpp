#include <benchmark/benchmark.h>

#include <vector>

#include "finsler/averaging.hpp"
#include "finsler/homotopy.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"
#include "finsler/transport.hpp"

using namespace finsler;

namespace {

FinslerMetric randers_x() {
    MetricSpec s;
    s.family = "randers";
    s.dimension = 2;
    s.coefficients = {{"b1", "0.3*x1^2"}, {"a22", "1 + x2^2"}};
    return instantiate(s);
}

const std::vector<double> kX{0.3, 0.1}, kY{1.0, 0.2};

}  // namespace

static void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse("sqrt(y1^2 + exp(2*x1)*y2^2) + 0.3*sin(x2)*y1", 2));
}
BENCHMARK(BM_Parse);

static void BM_JetF2(benchmark::State& state) {
    auto m = randers_x();
    std::vector<double> z{kX[0], kX[1], kY[0], kY[1]};
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto seeds = Jet::seed(z, order);
        std::span<const Jet> s(seeds);
        Jet f = m.F(s.first(2), s.subspan(2, 2));
        benchmark::DoNotOptimize(f * f);
    }
}
BENCHMARK(BM_JetF2)->DenseRange(1, 4);

static void BM_MetricAt(benchmark::State& state) {
    auto m = randers_x();
    for (auto _ : state) benchmark::DoNotOptimize(metric_at(m, kX, kY));
}
BENCHMARK(BM_MetricAt);

static void BM_PointTensors(benchmark::State& state) {
    auto m = randers_x();
    for (auto _ : state) benchmark::DoNotOptimize(point_tensors(m, kX, kY));
}
BENCHMARK(BM_PointTensors);

static void BM_AveragedMetric(benchmark::State& state) {
    auto m = randers_x();
    auto grid = build_grid(2, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(averaged_metric(m, Measure{}, kX, grid));
}
BENCHMARK(BM_AveragedMetric)->Arg(64)->Arg(256)->Arg(1024);

static void BM_Decomposition(benchmark::State& state) {
    auto m = randers_x();
    auto grid = build_grid(2, 256);
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(levi_civita_decomposed(m, Measure{}, kX, grid, 1e-3, workers));
}
BENCHMARK(BM_Decomposition)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SolveGauges(benchmark::State& state) {
    auto m = randers_x();
    auto grid = build_grid(2, 128);
    auto h = averaged_metric(m, Measure{}, kX, grid);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gauges(m, h, kX, 0.5, grid));
}
BENCHMARK(BM_SolveGauges)->Unit(benchmark::kMillisecond);

static void BM_Transport(benchmark::State& state) {
    auto m = randers_x();
    auto c = Curve::parse({"0.4*cos(2*pi*s)", "0.4*sin(2*pi*s)"}, 0.0, 1.0);
    const int steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(parallel_transport(m, c, kY, steps));
}
BENCHMARK(BM_Transport)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

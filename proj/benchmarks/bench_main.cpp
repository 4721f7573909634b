#include <benchmark/benchmark.h>

#include <random>

#include "bubbletda/embedding.hpp"
#include "bubbletda/landscape.hpp"
#include "bubbletda/lppls.hpp"
#include "bubbletda/lppls_fit.hpp"
#include "bubbletda/persistence.hpp"
#include "bubbletda/tda_pipeline.hpp"

namespace {

using namespace bubbletda;

const LpplsParams kBitcoin{637.0, 0.3003, 6.889, 11.11, -2.937e-4, 4.372e-5, -3.362e-5};

PointCloud lppls_window(std::size_t window) {
    const auto series = generate_synthetic(kBitcoin, {637, 0.0, 0});
    return window_at(delay_embed(series, 4, 5), 400, window);
}

void BM_RipsWindow(benchmark::State& state) {
    const auto dist = pairwise_distances(lppls_window(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rips_persistence(dist));
    }
}
BENCHMARK(BM_RipsWindow)->Arg(48)->Arg(72)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_LandscapeNorm(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<PersistencePair> pairs;
    for (int i = 0; i < state.range(0); ++i) {
        const double b = u(rng);
        pairs.push_back({b, b + u(rng), 1});
    }
    const auto diagram = make_diagram(1, pairs);
    for (auto _ : state) {
        benchmark::DoNotOptimize(landscape_norm(landscape_from_diagram(diagram), 1.0));
    }
}
BENCHMARK(BM_LandscapeNorm)->Arg(10)->Arg(100)->Arg(1000);

void BM_NormSeries(benchmark::State& state) {
    const auto series = generate_synthetic(kBitcoin, {637, 0.0, 0});
    TdaConfig cfg;
    cfg.threads = 1;
    const auto head = std::span<const double>(series).first(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(norms_over_windows(head, cfg));
    }
}
BENCHMARK(BM_NormSeries)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FitObjective(benchmark::State& state) {
    const LpplsParams truth{200.0, 0.3, 6.7, 11.0, -3e-4, 4.4e-5, -3.4e-5};
    const auto y = generate_synthetic(truth, {static_cast<std::size_t>(state.range(0)), 0.0, 0});
    std::vector<double> t(y.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
    const std::vector<double> p{205.0, 0.4, 7.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(objective(p, y, t));
    }
}
BENCHMARK(BM_FitObjective)->Arg(50)->Arg(200);

void BM_FitSegment(benchmark::State& state) {
    const LpplsParams truth{200.0, 0.3, 6.7, 11.0, -3e-4, 4.4e-5, -3.4e-5};
    const auto y = generate_synthetic(truth, {200, 0.001, 1});
    DeConfig cfg;
    cfg.max_generations = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_segment(y, FitBounds::defaults(200), cfg));
    }
}
BENCHMARK(BM_FitSegment)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

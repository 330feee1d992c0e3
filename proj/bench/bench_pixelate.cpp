#include <benchmark/benchmark.h>

#include <random>

#include "pixelate/pipeline.hpp"
#include "pixelate/synth.hpp"

using namespace pixelate;

namespace {

struct Prepared {
    PredictionGrid grid;
    PipelineResult result;
};

Prepared prepare(std::int64_t side) {
    SyntheticConfig c;
    c.n_x = c.n_y = side;
    c.seed = 11;
    c.num_sites = 6;
    c.range = static_cast<double>(side) / 4;
    PixelationParams p;
    p.num_sizes = 4;
    p.min_big = {2, 2};
    auto grid = generate_field(c);
    auto result = run_pipeline(grid, p);
    return {std::move(grid), std::move(result)};
}

void BM_Pixelate(benchmark::State& state) {
    const auto prep = prepare(state.range(0));
    const auto& r = prep.result;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pixelate::pixelate(prep.grid, r.partition, r.alloc, r.ladder));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_PixelateNaive(benchmark::State& state) {
    const auto prep = prepare(state.range(0));
    const auto& r = prep.result;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pixelate_naive(prep.grid, r.partition, r.alloc, r.ladder));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_PipelineAcceptance(benchmark::State& state) {
    const auto grid = bundled_dataset("demo_acceptance");
    for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(grid, PixelationParams{}));
}

}  // namespace

BENCHMARK(BM_Pixelate)->Arg(32)->Arg(64)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);
// the naive kernel rescans the grid per cell; keep it small
BENCHMARK(BM_PixelateNaive)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PipelineAcceptance)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "pgg/evolution.hpp"
#include "pgg/sweep.hpp"

namespace {

pgg::SweepConfig bench_config() {
    pgg::SweepConfig cfg;
    cfg.base.policy = pgg::Policy::Mimic;
    cfg.base.with_grid(16, 16);
    cfg.base.generations = 200;
    cfg.r_values = {1.5, 2.5, 3.5, 4.5};
    cfg.rho_values = {0.25, 0.75};
    cfg.replicates = 4;
    cfg.master_seed = 1;
    return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(pgg::run_sweep_serial(cfg));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepOpenMP(benchmark::State& state) {
    auto cfg = bench_config();
    cfg.parallelism = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pgg::run_sweep(cfg));
}
BENCHMARK(BM_SweepOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ScoreGeneration(benchmark::State& state) {
    pgg::SimParams p;
    p.policy = pgg::Policy::Mimic;
    p.rho_A = 0.5;
    p.r = 3.0;
    p.with_grid(32, 32);
    auto pop = pgg::initialize_population(p);
    const pgg::Neighborhood nb(p.grid_width, p.grid_height, p.k);
    for (auto _ : state) benchmark::DoNotOptimize(pgg::score_generation(pop, p, nb));
    state.SetItemsProcessed(state.iterations() * p.population_size * p.focal_games());
}
BENCHMARK(BM_ScoreGeneration);

}  // namespace

BENCHMARK_MAIN();

#include <cstdint>

#include <benchmark/benchmark.h>

#include "annealbench/dynamics.hpp"
#include "annealbench/instances.hpp"
#include "annealbench/schedule.hpp"
#include "annealbench/trials.hpp"

namespace ab = annealbench;

namespace {

const ab::Graph& bench_graph() {
    static const ab::Graph g = ab::gen_random_balanced_bipartite(2000, 8.0, 11);
    return g;
}

ab::TrialKernel ump_kernel(std::uint64_t steps) {
    static const ab::FugacitySchedule sched = ab::FugacitySchedule::fixed(4.0);
    return [steps](std::uint64_t, std::uint64_t seed) {
        ab::RecorderConfig rec;
        rec.keep_snapshots = false;
        return ab::run_ump(bench_graph(), sched, steps, seed, rec);
    };
}

void BM_TrialsSerial(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    const auto kernel = ump_kernel(100000);
    for (auto _ : state) benchmark::DoNotOptimize(ab::run_trials_serial(trials, 1, kernel));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials) * 100000);
}

void BM_TrialsParallel(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    const auto kernel = ump_kernel(100000);
    for (auto _ : state) benchmark::DoNotOptimize(ab::run_trials_parallel(trials, 1, kernel));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials) * 100000);
    state.counters["workers"] = ab::default_workers();
}

void BM_GreedySerial(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    const ab::TrialKernel kernel = [](std::uint64_t, std::uint64_t seed) {
        return ab::run_randomized_greedy(bench_graph(), seed).record;
    };
    for (auto _ : state) benchmark::DoNotOptimize(ab::run_trials_serial(trials, 1, kernel));
}

void BM_GreedyParallel(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    const ab::TrialKernel kernel = [](std::uint64_t, std::uint64_t seed) {
        return ab::run_randomized_greedy(bench_graph(), seed).record;
    };
    for (auto _ : state) benchmark::DoNotOptimize(ab::run_trials_parallel(trials, 1, kernel));
}

}  // namespace

BENCHMARK(BM_TrialsSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TrialsParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreedySerial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GreedyParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

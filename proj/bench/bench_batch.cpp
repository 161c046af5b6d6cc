// Serial reference vs OpenMP batch over a sweep-sized set of scenarios.

#include <benchmark/benchmark.h>

#include "spaace/batch.hpp"
#include "spaace/scenario.hpp"

namespace {

std::vector<spaace::Scenario> workload(int count) {
    std::vector<spaace::Scenario> out;
    const auto base = spaace::named_case("case1_1");
    for (int i = 0; i < count; ++i) {
        auto s = base;
        s.plant.scr = 1.0 + 0.25 * i;
        s.controller.mode = static_cast<spaace::Mode>(i % 3);
        out.push_back(s);
    }
    return out;
}

void run(benchmark::State& state, spaace::Execution exec) {
    const auto scenarios = workload(static_cast<int>(state.range(0)));
    spaace::BatchOptions opts;
    opts.execution = exec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spaace::run_batch(scenarios, opts));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Serial(benchmark::State& s) { run(s, spaace::Execution::Serial); }
void BM_Parallel(benchmark::State& s) { run(s, spaace::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_Serial)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(12)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

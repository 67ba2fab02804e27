#include <benchmark/benchmark.h>

#include "cloak/protocol/batch.hpp"

using namespace cloak::protocol;

namespace {

std::vector<ScenarioConfig> matrix(std::size_t copies) {
    std::vector<ScenarioConfig> out;
    for (std::size_t c = 0; c < copies; ++c)
        for (auto f : {"honest", "silent_then_respond", "never_respond", "mismatched_inputs", "drop_txcom", "two_rounds"}) {
            auto cfg = loadScenario(std::string("scenarios/") + f + ".json");
            cfg.seed = c;
            out.push_back(cfg);
        }
    return out;
}

void BM_RunBatchSerial(benchmark::State& state) {
    auto cfgs = matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(runBatchSerial(cfgs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfgs.size()));
}

void BM_RunBatch(benchmark::State& state) {
    auto cfgs = matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(runBatch(cfgs));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfgs.size()));
}

}  // namespace

BENCHMARK(BM_RunBatchSerial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RunBatch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

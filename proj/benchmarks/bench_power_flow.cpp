#include <benchmark/benchmark.h>

#include "gridsched/network.hpp"

using namespace gridsched;

namespace {

const CaseData& case33() {
    static const CaseData c = load_case_file(std::string(GRIDSCHED_DATA_DIR) + "/case33.csv");
    return c;
}

void BM_PowerFlowBase(benchmark::State& state) {
    const CaseData& c = case33();
    Injections inj(c.buses.size());
    for (auto _ : state) {
        PowerFlowResult pf = run_power_flow(c, inj);
        benchmark::DoNotOptimize(pf.p_loss_kw);
    }
}
BENCHMARK(BM_PowerFlowBase);

void BM_PowerFlowDispatched(benchmark::State& state) {
    const CaseData& c = case33();
    Injections inj(c.buses.size());
    inj.p_kw[c.index_of(17)] = 1500.0;
    inj.p_kw[c.index_of(25)] = 800.0;
    inj.p_kw[c.index_of(30)] = 1700.0;
    const double load_scale = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        PowerFlowResult pf = run_power_flow(c, inj, load_scale);
        benchmark::DoNotOptimize(pf.p_loss_kw);
    }
}
BENCHMARK(BM_PowerFlowDispatched)->Arg(70)->Arg(100)->Arg(126);

}  // namespace

BENCHMARK_MAIN();

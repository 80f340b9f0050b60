#include <benchmark/benchmark.h>

#include "gridsched/optimizer.hpp"

using namespace gridsched;

namespace {

void BM_SwarmSphere(benchmark::State& state) {
    const Objective sphere = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += (v - 250.0) * (v - 250.0);
        return -s;
    };
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    Box box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 500.0)};
    SwarmConfig cfg;
    for (auto _ : state) {
        BestResult r = swarm_kernel(sphere, box, cfg);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_SwarmSphere)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

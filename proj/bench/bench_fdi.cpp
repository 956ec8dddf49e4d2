// Parallel kernels against their serial references.

#include "random_mcn.hpp"

#include <mcn/fdi.hpp>
#include <mcn/linking.hpp>
#include <mcn/oracle.hpp>

#include <benchmark/benchmark.h>

using namespace mcn;
using namespace mcn::testing;

namespace {

Mcn wide_network()
{
    std::mt19937_64 rng(7);
    RandomMcnSpec spec;
    spec.max_relays = 12;
    spec.max_paths = 4;
    for (;;) {
        auto mcn = random_mcn(rng, spec);
        if (fault_candidates(mcn).size() >= 16) return mcn;
    }
}

const FdiContext& context()
{
    static const FdiContext ctx(wide_network());
    return ctx;
}

void BM_EnumerateParallel(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_scenarios(context(), static_cast<int>(state.range(0)), Method::Both));
}

void BM_EnumerateSerial(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_scenarios_serial(context(), static_cast<int>(state.range(0)), Method::Both));
}

Digraph dense_graph(int n)
{
    std::mt19937_64 rng(11);
    return random_digraph(rng, n, 0.4);
}

void BM_ConnectivityParallel(benchmark::State& state)
{
    const auto g = dense_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vertex_connectivity(g));
}

void BM_ConnectivitySerial(benchmark::State& state)
{
    const auto g = dense_graph(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(vertex_connectivity_serial(g));
}

FaultScenario oracle_scenario()
{
    const auto& c = context().candidates();
    return {{c[0], c[1], c.back()}, true};
}

void BM_OracleParallel(benchmark::State& state)
{
    OracleOptions opt;
    opt.trials = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fault_transfer_rank(context().mcn(), oracle_scenario(), opt));
}

void BM_OracleSerial(benchmark::State& state)
{
    OracleOptions opt;
    opt.trials = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fault_transfer_rank_serial(context().mcn(), oracle_scenario(), opt));
}

}  // namespace

BENCHMARK(BM_EnumerateParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConnectivityParallel)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConnectivitySerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(5)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSerial)->Arg(5)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// Serial reference kernels vs the OpenMP ones.

#include "polybloch/essential.hpp"
#include "polybloch/kernels.hpp"
#include "polybloch/sampling.hpp"
#include "polybloch/symbols.hpp"

#include <benchmark/benchmark.h>

using namespace polybloch;

namespace {

const SymbolMap& phi() {
    static const SymbolMap m = parse_map("mob(0.4, z1); z1*z2; exp(z3 - 1)", 3);
    return m;
}

const SymbolMap& psi() {
    static const SymbolMap m = parse_map("pow(z2, 2); scale(0.8i, z1); z3", 3);
    return m;
}

const Expr& f() {
    static const Expr e = parse_expression("z1*z2*z3 + log(2 - z1) + mob(0.5, z2)", 3);
    return e;
}

void BM_DiscrepancySerial(benchmark::State& state) {
    const BoundaryWeightedSampler sampler(3, 0);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::discrepancy_samples(phi(), psi(), sampler, count));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DiscrepancyParallel(benchmark::State& state) {
    const BoundaryWeightedSampler sampler(3, 0);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::discrepancy_samples(phi(), psi(), sampler, count));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BlochSerial(benchmark::State& state) {
    const BoundaryWeightedSampler sampler(3, 0);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::reference::bloch_samples(f(), sampler, count));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BlochParallel(benchmark::State& state) {
    const BoundaryWeightedSampler sampler(3, 0);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::bloch_samples(f(), sampler, count));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_DiscrepancySerial)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscrepancyParallel)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BlochSerial)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlochParallel)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

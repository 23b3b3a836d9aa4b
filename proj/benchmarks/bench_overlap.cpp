#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "stabex/overlap.hpp"
#include "stabex/states.hpp"

using namespace stabex;

namespace {

std::vector<cplx> random_p(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    std::vector<cplx> p(m);
    for (cplx& z : p) z = std::polar(std::abs(gauss(rng)), angle(rng));
    return p;
}

}  // namespace

static void BM_Bound(benchmark::State& state) {
    const auto p = random_p(std::size_t{1} << state.range(0), 1);
    std::vector<cplx> scratch;
    for (auto _ : state) benchmark::DoNotOptimize(bound(p, scratch));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}
BENCHMARK(BM_Bound)->DenseRange(3, 10);

// Full (Q, c) maximization of one P array. With pruning on, the floor sits
// at 95% of the exact maximum.
static void BM_PhaseSearch(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const bool prune = state.range(1) != 0;
    const auto p = random_p(std::size_t{1} << k, 2);
    const PruneFloor floor{prune ? 0.95 * max_over_qc(p, -1.0, nullptr, false) : -1.0, nullptr};
    PhaseSearch search(k);
    const LeafFn sink = [](std::uint64_t, std::uint32_t, cplx) {};
    for (auto _ : state) {
        benchmark::DoNotOptimize(search.run(p, floor, false, sink, prune));
    }
    state.counters["leaves"] = benchmark::Counter(static_cast<double>(search.stats().leaves),
                                                  benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_PhaseSearch)->ArgsProduct({{3, 4, 5}, {0, 1}});

static void BM_MaxOverQc(benchmark::State& state) {
    const auto p = random_p(std::size_t{1} << state.range(0), 3);
    const double floor = 0.95 * max_over_qc(p, -1.0, nullptr, false);
    for (auto _ : state) benchmark::DoNotOptimize(max_over_qc(p, floor, nullptr, false));
}
BENCHMARK(BM_MaxOverQc)->DenseRange(2, 5);

static void BM_Fidelity(benchmark::State& state) {
    Rng rng(4);
    const StateVector b = haar_state(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(fidelity(b, false).fidelity);
}
BENCHMARK(BM_Fidelity)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_FidelityReal(benchmark::State& state) {
    Rng rng(5);
    const StateVector b = real_gaussian_state(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(fidelity(b, true).fidelity);
}
BENCHMARK(BM_FidelityReal)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

static void BM_ScanTopM(benchmark::State& state) {
    Rng rng(6);
    const StateVector b = haar_state(5, rng);
    const SearchBudget budget{static_cast<std::size_t>(state.range(0)), 0.0, false};
    for (auto _ : state) benchmark::DoNotOptimize(scan(b, budget).size());
}
BENCHMARK(BM_ScanTopM)->Arg(1)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

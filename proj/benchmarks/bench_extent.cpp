#include <benchmark/benchmark.h>

#include "stabex/extent.hpp"
#include "stabex/socp.hpp"
#include "stabex/states.hpp"

using namespace stabex;

static void BM_SolveL1(benchmark::State& state) {
    const int n = 4;
    const auto cols = static_cast<std::size_t>(state.range(0));
    Rng rng(7);
    const StateVector b = haar_state(n, rng);
    ColumnSet set(n);
    for (const OverlapHit& h : scan(b, SearchBudget{cols, 0.0, false})) set.add(h.form);
    const Eigen::MatrixXcd& a = set.matrix();
    const Eigen::VectorXcd target = Eigen::Map<const Eigen::VectorXcd>(b.amps.data(), 16);
    for (auto _ : state) benchmark::DoNotOptimize(solve_complex_l1(a, target).primal_value);
}
BENCHMARK(BM_SolveL1)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_ExtentHaar(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(8);
    const StateVector b = haar_state(n, rng);
    const CGConfig cfg = CGConfig::defaults_for(n);
    for (auto _ : state) benchmark::DoNotOptimize(compute_extent(b, cfg).extent);
}
BENCHMARK(BM_ExtentHaar)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

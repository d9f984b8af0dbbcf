// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to vary the team.

#include "sigmacalc/catalog.hpp"
#include "sigmacalc/multiple_gamma.hpp"
#include "sigmacalc/parallel.hpp"
#include "sigmacalc/sigma.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace sigmacalc;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) ? "parallel" : "serial"); }

void BM_LatticeSum(benchmark::State& state)
{
    const std::int64_t n = state.range(0);
    const Exec exec = exec_of(state);
    for (auto _ : state) {
        const double s = lattice_sum<double>(1, n + 1, [](std::int64_t k) {
            const double kd = static_cast<double>(k);
            return std::log(kd) - std::log(kd + 0.5);
        }, exec);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * n);
    label(state);
}

void BM_BarnesProduct(benchmark::State& state)
{
    const std::int64_t n = state.range(0);
    const Exec exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(barnes_limit_product(0.5, n, BarnesVariant::classic, exec));
    state.SetItemsProcessed(state.iterations() * n);
    label(state);
}

void BM_SigmaGrid(benchmark::State& state)
{
    const auto g = catalog_get("log");
    std::vector<double> xs;
    for (int i = 0; i < state.range(0); ++i)
        xs.push_back(0.5 + 0.1 * i + 1e-3);
    const Exec exec = exec_of(state);
    for (auto _ : state) {
        auto out = parallel_map<double>(xs, [&](double x) { return sigma_eval(g, 1, x).value; }, exec);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    label(state);
}

} // namespace

BENCHMARK(BM_LatticeSum)->ArgsProduct({{1 << 16, 1 << 20, 1 << 22}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BarnesProduct)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SigmaGrid)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>

#include "melnlab/closed_forms.hpp"
#include "melnlab/kernels.hpp"

using namespace melnlab;

namespace {

SystemConfig bench_config(int n, int k) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SystemConfig c(n, k);
    for (int i = 1; i <= k; ++i) {
        std::array<double, 12> v;
        for (double& e : v) e = U(rng);
        c.order(i) = OrderCoefficients::from_flat(v);
    }
    return c;
}

std::vector<double> grid(int m) {
    std::vector<double> r;
    for (int i = 0; i < m; ++i) r.push_back(0.3 + 2.5 * i / (m - 1));
    return r;
}

void BM_MelnikovTable(benchmark::State& st) {
    const SystemConfig cfg = bench_config(3, 4);
    const auto r = grid(64);
    const bool par = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(melnikov_table(cfg, r, par));
}

void BM_ExtractionTable(benchmark::State& st) {
    const SystemConfig cfg = bench_config(2, 2);
    const auto r = grid(8);
    const bool par = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(extraction_table(cfg, 2, r, {}, par));
}

void BM_WronskianTable(benchmark::State& st) {
    const OrderedFamily fam = family_F(5, 2);
    const auto x = grid(256);
    const bool par = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(wronskian_table(fam, 7, x, par));
}

void BM_CeilingScan(benchmark::State& st) {
    const bool par = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(m1_ceiling_scan(3, 64, 11, par));
}

}  // namespace

// Argument 0 runs the serial reference, 1 the OpenMP kernel.
BENCHMARK(BM_MelnikovTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractionTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WronskianTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CeilingScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

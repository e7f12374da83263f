#include <benchmark/benchmark.h>

#include <cmath>

#include "lpplab/brownian.hpp"
#include "lpplab/field.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/passage.hpp"

using namespace lpplab;

namespace {

void BM_weight_rows(benchmark::State& state) {
    const FieldSpec field{7, FieldBounds{}};
    const std::int64_t width = state.range(0);
    std::vector<double> row(static_cast<std::size_t>(width));
    std::int64_t s = 0;
    for (auto _ : state) {
        fill_row_weights(field, s, -width, row);
        benchmark::DoNotOptimize(row.data());
        s += 2;  // keep the row parity aligned with a_lo
    }
    state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_weight_rows)->Arg(1024)->Arg(4096);

void BM_solve_forward(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    SolveOptions opts;
    opts.keep_all_rows = false;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const FieldSpec field{seed++, FieldBounds{}};
        const auto sol = solve_forward(field, InitialCondition::flat(), 2 * n,
                                       RegionPredicate::all(), opts);
        benchmark::DoNotOptimize(sol.diagonal_value(n));
    }
    const double cells = (2.0 * n + 1) * (2.0 * n + 2) / 2.0;
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cells));
}
BENCHMARK(BM_solve_forward)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_solve_forward_with_backpointers(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    SolveOptions opts;
    opts.keep_all_rows = false;
    opts.keep_backpointers = true;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const FieldSpec field{seed++, FieldBounds{}};
        const auto sol = solve_forward(field, InitialCondition::flat(), 2 * n,
                                       RegionPredicate::all(), opts);
        const auto path = trace_geodesic(sol, {n, n});
        benchmark::DoNotOptimize(path.weight);
    }
    state.SetItemsProcessed(state.iterations() * 2 * n);
}
BENCHMARK(BM_solve_forward_with_backpointers)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_solve_backward(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const std::int64_t r = n / 5;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const FieldSpec field{seed++, FieldBounds{}};
        const auto prof = solve_backward(field, {n, n}, r, n - r);
        benchmark::DoNotOptimize(prof.values.data());
    }
    const double cells = 2.0 * (n - r) * (n - r);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cells));
}
BENCHMARK(BM_solve_backward)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_exit_constrained(benchmark::State& state) {
    const std::int64_t r = state.range(0);
    const double rho = std::pow(static_cast<double>(r), 2.0 / 3.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const FieldSpec field{seed++, FieldBounds{}};
        benchmark::DoNotOptimize(exit_constrained_max(field, InitialCondition::flat(), r,
                                                      4.0 * rho,
                                                      static_cast<std::int64_t>(rho)));
    }
}
BENCHMARK(BM_exit_constrained)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_sample_bm(benchmark::State& state) {
    std::uint64_t seed = 1;
    const double step = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_bm(2.0, step, seed++).values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4.0 / step));
}
BENCHMARK(BM_sample_bm);

}  // namespace

BENCHMARK_MAIN();

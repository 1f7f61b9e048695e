#include "lpreduce/datasets.hpp"
#include "lpreduce/pipeline.hpp"
#include "lpreduce/snowflake.hpp"
#include "lpreduce/sparsifier.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace lpreduce;

Eigen::MatrixXd random_columns(std::uint64_t seed, int rows, int cols) {
    Rng rng(seed);
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) out(i, j) = rng.normal();
    return out;
}

void BM_snowflake_build(benchmark::State& state) {
    const double range_ratio = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_snowflake_map(0.5, 0.1, 1.0, range_ratio));
    }
}
BENCHMARK(BM_snowflake_build)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_snowflake_audit(benchmark::State& state) {
    const SnowflakeMap map = build_snowflake_map(0.5, 0.1, 0.01, 100.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(map.audit(static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_snowflake_audit)->Arg(1000)->Arg(10000);

// The barrier loop is the pipeline's hot spot: ceil(d * r) steps, each a
// symmetric eigendecomposition of the running r x r sum plus one r x r by
// r x m product for the scores.
void BM_bss_sparsify(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    VectorFamily family;
    family.columns = random_columns(17, r, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bss_sparsify(family, 4.0));
    }
}
BENCHMARK(BM_bss_sparsify)->Args({4, 100})->Args({16, 200})->Args({64, 400});

void BM_reduce_lp(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    LpPointSet points;
    points.p = 1.0;
    points.points = random_columns(23, k, m);
    ReductionConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_lp(points, config));
    }
}
BENCHMARK(BM_reduce_lp)->Args({8, 40})->Args({12, 80});

}  // namespace

BENCHMARK_MAIN();

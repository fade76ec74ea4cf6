// Serial reference vs OpenMP kernels on representative sizes.

#include <benchmark/benchmark.h>

#include <vector>

#include "latentpack/kernels.hpp"
#include "latentpack/model.hpp"
#include "latentpack/rng.hpp"

namespace {

using namespace latentpack;

std::vector<double> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::vector<double> data(rows * cols);
    rng::Stream stream(seed);
    for (double& v : data) v = stream.next_real() * 2.0 - 1.0;
    return data;
}

void bm_matmul_mb_serial(benchmark::State& state) {
    const std::size_t m = std::size_t(state.range(0)), n = m, r = 3;
    const auto M = random_matrix(m, n, 1);
    const auto B = random_matrix(n, r, 2);
    std::vector<double> out(m * r);
    for (auto _ : state) {
        kernels::matmul_mb_serial(M.data(), m, n, B.data(), r, out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_matmul_mb_omp(benchmark::State& state) {
    const std::size_t m = std::size_t(state.range(0)), n = m, r = 3;
    const auto M = random_matrix(m, n, 1);
    const auto B = random_matrix(n, r, 2);
    std::vector<double> out(m * r);
    for (auto _ : state) {
        kernels::matmul_mb(M.data(), m, n, B.data(), r, out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_assign_serial(benchmark::State& state) {
    const std::size_t count = std::size_t(state.range(0)), dim = 3, k = 5;
    const auto points = random_matrix(count, dim, 3);
    const auto centroids = random_matrix(k, dim, 4);
    std::vector<std::uint32_t> labels(count);
    for (auto _ : state) {
        kernels::assign_nearest_serial(points.data(), count, dim, centroids.data(), k,
                                       labels.data());
        benchmark::DoNotOptimize(labels.data());
    }
}

void bm_assign_omp(benchmark::State& state) {
    const std::size_t count = std::size_t(state.range(0)), dim = 3, k = 5;
    const auto points = random_matrix(count, dim, 3);
    const auto centroids = random_matrix(k, dim, 4);
    std::vector<std::uint32_t> labels(count);
    for (auto _ : state) {
        kernels::assign_nearest(points.data(), count, dim, centroids.data(), k, labels.data());
        benchmark::DoNotOptimize(labels.data());
    }
}

void bm_threshold_serial(benchmark::State& state) {
    const std::size_t count = std::size_t(state.range(0)), dim = 2;
    const auto points = random_matrix(count, dim, 5);
    for (auto _ : state) {
        auto edges = kernels::threshold_edges_serial(points.data(), count, dim, 0.05);
        benchmark::DoNotOptimize(edges.data());
    }
}

void bm_threshold_omp(benchmark::State& state) {
    const std::size_t count = std::size_t(state.range(0)), dim = 2;
    const auto points = random_matrix(count, dim, 5);
    for (auto _ : state) {
        auto edges = kernels::threshold_edges(points.data(), count, dim, 0.05);
        benchmark::DoNotOptimize(edges.data());
    }
}

void bm_sample_serial(benchmark::State& state) {
    const std::size_t m = std::size_t(state.range(0)), n = m;
    const ModelParams params = sbm_params(0.05, 0.5, 3);
    std::vector<std::uint32_t> rows(m, 0), cols(n, 1);
    std::vector<std::uint8_t> cells(m * n);
    for (auto _ : state) {
        kernels::sample_cells_serial(params, rows.data(), m, cols.data(), n, 7, 0, cells.data());
        benchmark::DoNotOptimize(cells.data());
    }
}

void bm_sample_omp(benchmark::State& state) {
    const std::size_t m = std::size_t(state.range(0)), n = m;
    const ModelParams params = sbm_params(0.05, 0.5, 3);
    std::vector<std::uint32_t> rows(m, 0), cols(n, 1);
    std::vector<std::uint8_t> cells(m * n);
    for (auto _ : state) {
        kernels::sample_cells(params, rows.data(), m, cols.data(), n, 7, 0, cells.data());
        benchmark::DoNotOptimize(cells.data());
    }
}

}  // namespace

BENCHMARK(bm_matmul_mb_serial)->Arg(500)->Arg(1500);
BENCHMARK(bm_matmul_mb_omp)->Arg(500)->Arg(1500);
BENCHMARK(bm_assign_serial)->Arg(10000)->Arg(100000);
BENCHMARK(bm_assign_omp)->Arg(10000)->Arg(100000);
BENCHMARK(bm_threshold_serial)->Arg(500)->Arg(2000);
BENCHMARK(bm_threshold_omp)->Arg(500)->Arg(2000);
BENCHMARK(bm_sample_serial)->Arg(500)->Arg(1500);
BENCHMARK(bm_sample_omp)->Arg(500)->Arg(1500);

BENCHMARK_MAIN();

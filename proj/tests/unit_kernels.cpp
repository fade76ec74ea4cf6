#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <vector>

#include "helpers.hpp"
#include "latentpack/kernels.hpp"
#include "latentpack/model.hpp"
#include "latentpack/rng.hpp"

using namespace latentpack;

namespace {

std::vector<double> random_doubles(std::size_t count, std::uint64_t seed) {
    std::vector<double> data(count);
    rng::Stream stream(seed);
    for (double& v : data) v = stream.next_real() * 2.0 - 1.0;
    return data;
}

}  // namespace

// The OpenMP kernels must be bit-identical to the serial references, for any
// thread count: every output element is one serial reduction.

TEST_CASE("matmul kernels: omp == serial, bitwise") {
    const std::size_t m = 83, n = 57, r = 4;
    const auto M = random_doubles(m * n, 1);
    const auto B = random_doubles(n * r, 2);
    const auto A = random_doubles(m * r, 3);

    std::vector<double> out_par(m * r), out_ser(m * r);
    kernels::matmul_mb(M.data(), m, n, B.data(), r, out_par.data());
    kernels::matmul_mb_serial(M.data(), m, n, B.data(), r, out_ser.data());
    CHECK(out_par == out_ser);

    std::vector<double> tout_par(n * r), tout_ser(n * r);
    kernels::matmul_mtb(M.data(), m, n, A.data(), r, tout_par.data());
    kernels::matmul_mtb_serial(M.data(), m, n, A.data(), r, tout_ser.data());
    CHECK(tout_par == tout_ser);
}

TEST_CASE("assign_nearest: omp == serial, ties to the lower index") {
    const std::size_t count = 1000, dim = 3, k = 7;
    const auto points = random_doubles(count * dim, 4);
    auto centroids = random_doubles(k * dim, 5);
    // force an exact tie: two identical centroids
    for (std::size_t t = 0; t < dim; ++t) centroids[(k - 1) * dim + t] = centroids[t];

    std::vector<std::uint32_t> par(count), ser(count);
    kernels::assign_nearest(points.data(), count, dim, centroids.data(), k, par.data());
    kernels::assign_nearest_serial(points.data(), count, dim, centroids.data(), k, ser.data());
    CHECK(par == ser);
    for (auto label : par) CHECK(label != k - 1);  // tie resolved to centroid 0
}

TEST_CASE("threshold_edges: omp == serial") {
    const std::size_t count = 300, dim = 2;
    const auto points = random_doubles(count * dim, 6);
    CHECK(kernels::threshold_edges(points.data(), count, dim, 0.3) ==
          kernels::threshold_edges_serial(points.data(), count, dim, 0.3));
}

TEST_CASE("sample_cells: omp == serial") {
    const ModelParams params = sbm_params(0.2, 0.7, 3);
    const std::size_t m = 64, n = 41;
    std::vector<std::uint32_t> rows(m), cols(n);
    for (std::size_t i = 0; i < m; ++i) rows[i] = i % 3;
    for (std::size_t j = 0; j < n; ++j) cols[j] = j % 3;

    std::vector<std::uint8_t> par(m * n), ser(m * n);
    kernels::sample_cells(params, rows.data(), m, cols.data(), n, 17, 100, par.data());
    kernels::sample_cells_serial(params, rows.data(), m, cols.data(), n, 17, 100, ser.data());
    CHECK(par == ser);
}

#ifdef _OPENMP
TEST_CASE("kernels: output independent of the thread count") {
    const std::size_t m = 120, n = 77, r = 3;
    const auto M = random_doubles(m * n, 8);
    const auto B = random_doubles(n * r, 9);

    const int saved = omp_get_max_threads();
    std::vector<double> with_one(m * r), with_many(m * r);
    omp_set_num_threads(1);
    kernels::matmul_mb(M.data(), m, n, B.data(), r, with_one.data());
    omp_set_num_threads(4);
    kernels::matmul_mb(M.data(), m, n, B.data(), r, with_many.data());
    omp_set_num_threads(saved);
    CHECK(with_one == with_many);
}
#endif

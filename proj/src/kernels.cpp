#include "latentpack/kernels.hpp"

#include <cmath>
#include <limits>

#include "latentpack/model.hpp"
#include "latentpack/rng.hpp"

namespace latentpack::kernels {

namespace {

inline void matmul_mb_row(const double* M, std::size_t n, const double* B, std::size_t r,
                          std::size_t i, double* out) {
    const double* row = M + i * n;
    double* out_row = out + i * r;
    for (std::size_t c = 0; c < r; ++c) out_row[c] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double mij = row[j];
        const double* b_row = B + j * r;
        for (std::size_t c = 0; c < r; ++c) out_row[c] += mij * b_row[c];
    }
}

inline void matmul_mtb_col(const double* M, std::size_t m, std::size_t n, const double* A,
                           std::size_t r, std::size_t j, double* out) {
    double* out_row = out + j * r;
    for (std::size_t c = 0; c < r; ++c) out_row[c] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double mij = M[i * n + j];
        const double* a_row = A + i * r;
        for (std::size_t c = 0; c < r; ++c) out_row[c] += mij * a_row[c];
    }
}

inline std::uint32_t nearest_label(const double* p, std::size_t dim, const double* centroids,
                                   std::size_t k) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        const double* centroid = centroids + c * dim;
        double d = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
            const double diff = p[t] - centroid[t];
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    return best;
}

inline void threshold_row(const double* points, std::size_t count, std::size_t dim, double theta,
                          const double* norms, std::size_t i, std::vector<std::uint32_t>& out) {
    out.clear();
    const double* a = points + i * dim;
    for (std::size_t j = i + 1; j < count; ++j) {
        const double denom = 0.5 * (norms[i] + norms[j]);
        if (denom == 0.0) {
            out.push_back(static_cast<std::uint32_t>(j));  // both zero by convention
            continue;
        }
        const double* b = points + j * dim;
        double d = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
            const double diff = a[t] - b[t];
            d += diff * diff;
        }
        if (std::sqrt(d) <= theta * denom) out.push_back(static_cast<std::uint32_t>(j));
    }
}

std::vector<double> point_norms(const double* points, std::size_t count, std::size_t dim) {
    std::vector<double> norms(count);
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < dim; ++t) s += points[i * dim + t] * points[i * dim + t];
        norms[i] = std::sqrt(s);
    }
    return norms;
}

inline std::uint8_t sample_one_cell(const ModelParams& params, std::uint32_t u, std::uint32_t v,
                                    std::uint64_t seed, std::uint64_t counter) {
    return static_cast<std::uint8_t>(
        rng::inverse_cdf(params.q_vec(u, v), rng::unit_real(seed, counter)));
}

}  // namespace

void matmul_mb(const double* M, std::size_t m, std::size_t n, const double* B, std::size_t r,
               double* out) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(m); ++i)
        matmul_mb_row(M, n, B, r, std::size_t(i), out);
}

void matmul_mb_serial(const double* M, std::size_t m, std::size_t n, const double* B,
                      std::size_t r, double* out) {
    for (std::size_t i = 0; i < m; ++i) matmul_mb_row(M, n, B, r, i, out);
}

void matmul_mtb(const double* M, std::size_t m, std::size_t n, const double* A, std::size_t r,
                double* out) {
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < std::int64_t(n); ++j)
        matmul_mtb_col(M, m, n, A, r, std::size_t(j), out);
}

void matmul_mtb_serial(const double* M, std::size_t m, std::size_t n, const double* A,
                       std::size_t r, double* out) {
    for (std::size_t j = 0; j < n; ++j) matmul_mtb_col(M, m, n, A, r, j, out);
}

void assign_nearest(const double* points, std::size_t count, std::size_t dim,
                    const double* centroids, std::size_t k, std::uint32_t* labels) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(count); ++i)
        labels[i] = nearest_label(points + std::size_t(i) * dim, dim, centroids, k);
}

void assign_nearest_serial(const double* points, std::size_t count, std::size_t dim,
                           const double* centroids, std::size_t k, std::uint32_t* labels) {
    for (std::size_t i = 0; i < count; ++i)
        labels[i] = nearest_label(points + i * dim, dim, centroids, k);
}

std::vector<std::vector<std::uint32_t>> threshold_edges(const double* points, std::size_t count,
                                                        std::size_t dim, double theta) {
    const std::vector<double> norms = point_norms(points, count, dim);
    std::vector<std::vector<std::uint32_t>> edges(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < std::int64_t(count); ++i)
        threshold_row(points, count, dim, theta, norms.data(), std::size_t(i),
                      edges[std::size_t(i)]);
    return edges;
}

std::vector<std::vector<std::uint32_t>> threshold_edges_serial(const double* points,
                                                               std::size_t count, std::size_t dim,
                                                               double theta) {
    const std::vector<double> norms = point_norms(points, count, dim);
    std::vector<std::vector<std::uint32_t>> edges(count);
    for (std::size_t i = 0; i < count; ++i)
        threshold_row(points, count, dim, theta, norms.data(), i, edges[i]);
    return edges;
}

void sample_cells(const ModelParams& params, const std::uint32_t* row_labels, std::size_t m,
                  const std::uint32_t* col_labels, std::size_t n, std::uint64_t seed,
                  std::uint64_t counter_base, std::uint8_t* cells) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < std::int64_t(m); ++i) {
        const std::uint32_t u = row_labels[i];
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t cell = std::size_t(i) * n + j;
            cells[cell] = sample_one_cell(params, u, col_labels[j], seed, counter_base + cell);
        }
    }
}

void sample_cells_serial(const ModelParams& params, const std::uint32_t* row_labels, std::size_t m,
                         const std::uint32_t* col_labels, std::size_t n, std::uint64_t seed,
                         std::uint64_t counter_base, std::uint8_t* cells) {
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint32_t u = row_labels[i];
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t cell = i * n + j;
            cells[cell] = sample_one_cell(params, u, col_labels[j], seed, counter_base + cell);
        }
    }
}

}  // namespace latentpack::kernels

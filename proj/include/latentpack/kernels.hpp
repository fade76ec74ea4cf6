#pragma once

#include <cstdint>
#include <vector>

namespace latentpack {
struct ModelParams;
}

// Data-parallel inner loops, each in an OpenMP flavor and a serial
// reference flavor.  Every output element is produced by exactly one
// serial reduction, so the two flavors are bit-identical and results do
// not depend on the thread count.
namespace latentpack::kernels {

// out (m x r) = M (m x n) * B (n x r), all row-major.
void matmul_mb(const double* M, std::size_t m, std::size_t n, const double* B, std::size_t r,
               double* out);
void matmul_mb_serial(const double* M, std::size_t m, std::size_t n, const double* B,
                      std::size_t r, double* out);

// out (n x r) = M^T (n x m) * A (m x r); M given row-major m x n.
void matmul_mtb(const double* M, std::size_t m, std::size_t n, const double* A, std::size_t r,
                double* out);
void matmul_mtb_serial(const double* M, std::size_t m, std::size_t n, const double* A,
                       std::size_t r, double* out);

// Nearest centroid per point under squared Euclidean distance; ties go to
// the lower centroid index.
void assign_nearest(const double* points, std::size_t count, std::size_t dim,
                    const double* centroids, std::size_t k, std::uint32_t* labels);
void assign_nearest_serial(const double* points, std::size_t count, std::size_t dim,
                           const double* centroids, std::size_t k, std::uint32_t* labels);

// For each i, the sorted list of j > i whose relative distance
// ||a_i-a_j|| / ((||a_i||+||a_j||)/2) is <= theta; two zero-norm points
// count as connected.
std::vector<std::vector<std::uint32_t>> threshold_edges(const double* points, std::size_t count,
                                                        std::size_t dim, double theta);
std::vector<std::vector<std::uint32_t>> threshold_edges_serial(const double* points,
                                                               std::size_t count, std::size_t dim,
                                                               double theta);

// Fills the m*n cell array from the model, conditionally on the given
// latent labels, using the counter-based stream (seed, counter_base + cell).
void sample_cells(const ModelParams& params, const std::uint32_t* row_labels, std::size_t m,
                  const std::uint32_t* col_labels, std::size_t n, std::uint64_t seed,
                  std::uint64_t counter_base, std::uint8_t* cells);
void sample_cells_serial(const ModelParams& params, const std::uint32_t* row_labels, std::size_t m,
                         const std::uint32_t* col_labels, std::size_t n, std::uint64_t seed,
                         std::uint64_t counter_base, std::uint8_t* cells);

}  // namespace latentpack::kernels

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latentpack/table.hpp"

namespace latentpack {

// Symbol -> real map used to build the embedded matrix; Theorem-style
// normalization requires max |psi(x)| <= 1.
struct EmbeddingMap {
    std::vector<double> psi;  // indexed by symbol

    void validate(const Alphabet& alphabet) const;
    // Affine spread of 0..|X|-1 into [-1,1]; identically 0 for |X| = 1.
    static EmbeddingMap default_map(const Alphabet& alphabet);
};

enum class ClusterMethod { KMeans, Threshold };

struct SpectralConfig {
    std::uint32_t k_r = 2;
    std::uint32_t k_c = 2;
    std::uint32_t power_iters = 0;  // 0 = ceil(4*log2(min(m,n))) + 10
    std::uint32_t restarts = 5;
    double row_subsample = 1.0;  // (0,1]; < 1 runs the SVD on a row sample
    ClusterMethod method = ClusterMethod::KMeans;
    double theta = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

// Row-major m x n real matrix.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

RealMatrix embed(const Table& table, const EmbeddingMap& psi);

struct SvdResult {
    RealMatrix left;   // m x r, orthonormal columns
    RealMatrix right;  // n x r, orthonormal columns
    std::vector<double> sigma;
    double residual = 0.0;  // ||M^T A - B diag(sigma)||_F
};

// Truncated SVD by block power iteration (orthonormalized every step).
SvdResult top_singular_vectors(const RealMatrix& m, std::uint32_t r, std::uint32_t iters,
                               std::uint64_t seed);

// Lloyd's KMeans with random-point initialization, best WCSS over restarts;
// empty clusters are reseeded to the point farthest from its centroid.
struct KMeansResult {
    std::vector<std::uint32_t> labels;
    double wcss = 0.0;
};
KMeansResult kmeans(const RealMatrix& points, std::uint32_t k, std::uint32_t restarts,
                    std::uint64_t seed);

// Connected components of the relative-distance graph; labels numbered in
// first-occurrence order.
std::vector<std::uint32_t> threshold_cluster(const RealMatrix& points, double theta);

struct SpectralReport {
    std::vector<double> sigma;
    double svd_residual = 0.0;
    double wcss_rows = 0.0;
    double wcss_cols = 0.0;
    std::uint32_t components_rows = 0;
    std::uint32_t components_cols = 0;
    std::uint32_t sampled_rows = 0;
};

LatentAssignment estimate_latents(const Table& table, const SpectralConfig& config,
                                  SpectralReport* report = nullptr);

// Err_U: misclassification fraction under the best label permutation;
// exhaustive over permutations for sizes <= 8, Hungarian assignment above.
double latent_error(std::span<const std::uint32_t> estimated,
                    std::span<const std::uint32_t> truth, std::uint32_t latent_size);

}  // namespace latentpack

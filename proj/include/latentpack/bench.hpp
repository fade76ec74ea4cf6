#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latentpack/container.hpp"
#include "latentpack/model.hpp"
#include "latentpack/rates.hpp"

namespace latentpack {

// Measured outcome at one (k_r, k_c) grid point, averaged over KMeans trials.
struct SearchCell {
    std::uint32_t k_r = 0;
    std::uint32_t k_c = 0;
    double mean_bytes = 0.0;
    double mean_drr = 0.0;
};

struct SearchResult {
    std::uint32_t best_k_r = 0;
    std::uint32_t best_k_c = 0;
    double best_mean_bytes = 0.0;
    std::vector<SearchCell> grid;  // row-major over (k_r, k_c)

    std::string grid_csv() const;
};

// Compresses at every grid point, averaging compressed size over
// `kmeans_trials` seeded estimation runs; returns the argmin.
SearchResult search_latent_sizes(const Table& table, std::uint32_t k_r_min, std::uint32_t k_r_max,
                                 std::uint32_t k_c_min, std::uint32_t k_c_max, CodecId codec,
                                 std::uint64_t seed, std::uint32_t kmeans_trials = 5);

// Which measured pipelines a sweep should run.
struct SweepCodecs {
    bool naive_lz = true;
    bool naive_ans = true;
    bool latent_lz = true;
    bool latent_ans = true;
};

struct SweepPoint {
    double p0 = 0.0;
    double p1 = 0.0;
    double drr_naive_lz = 0.0;
    double drr_naive_ans = 0.0;
    double drr_latent_lz = 0.0;
    double drr_latent_ans = 0.0;
    // theory columns: 1 - rate, depending only on (p0, p1, k, alpha)
    double theory_drr_opt = 0.0;
    double theory_drr_fs = 0.0;
    double theory_drr_lz = 0.0;
};

struct SweepConfig {
    std::uint32_t k = 3;
    std::uint32_t m = 1000;
    std::uint32_t n = 1000;
    std::vector<double> p0_grid;
    std::vector<double> p1_grid;
    std::uint32_t reps = 4;
    std::uint64_t seed = 0;
    SweepCodecs codecs;
    std::uint32_t kmeans_restarts = 5;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // p0-major over (p0, p1)
    double alpha = 1.0;

    std::string csv() const;
};

// Per grid point: mean measured DRR over reps for the enabled pipelines plus
// the three theory columns with alpha = log m / log n.
SweepResult synthetic_sweep(const SweepConfig& config);

// Naive baselines: the row-major serialization through one codec.
std::uint64_t naive_compressed_bytes(const Table& table, CodecId codec);

}  // namespace latentpack

#include "latentpack/bench.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "latentpack/rng.hpp"

namespace latentpack {

namespace {

constexpr std::uint64_t kSaltTrial = 0x7472696c;  // "tril"
constexpr std::uint64_t kSaltRep = 0x72657073;    // "reps"

}  // namespace

std::string SearchResult::grid_csv() const {
    std::ostringstream out;
    out << "k_r,k_c,mean_bytes,mean_drr\n";
    for (const auto& cell : grid)
        out << cell.k_r << ',' << cell.k_c << ',' << cell.mean_bytes << ',' << cell.mean_drr
            << '\n';
    return out.str();
}

SearchResult search_latent_sizes(const Table& table, std::uint32_t k_r_min, std::uint32_t k_r_max,
                                 std::uint32_t k_c_min, std::uint32_t k_c_max, CodecId codec,
                                 std::uint64_t seed, std::uint32_t kmeans_trials) {
    table.validate();
    if (k_r_min < 1 || k_r_min > k_r_max || k_c_min < 1 || k_c_min > k_c_max)
        throw ParamError("search_latent_sizes: empty range");
    if (kmeans_trials < 1) kmeans_trials = 1;

    SearchResult result;
    result.best_mean_bytes = std::numeric_limits<double>::infinity();
    for (std::uint32_t k_r = k_r_min; k_r <= k_r_max; ++k_r) {
        for (std::uint32_t k_c = k_c_min; k_c <= k_c_max; ++k_c) {
            SearchCell cell{k_r, k_c, 0.0, 0.0};
            for (std::uint32_t trial = 0; trial < kmeans_trials; ++trial) {
                CompressConfig config;
                config.block_codec = codec;
                config.latent_codec = codec;
                config.spectral.k_r = std::min(k_r, table.m);
                config.spectral.k_c = std::min(k_c, table.n);
                config.spectral.seed = rng::derive(seed, kSaltTrial + trial);
                const auto bytes = compress(table, config);
                cell.mean_bytes += double(bytes.size()) / kmeans_trials;
                cell.mean_drr += drr(bytes.size(), table.m, table.n, table.alphabet) / kmeans_trials;
            }
            if (cell.mean_bytes < result.best_mean_bytes) {
                result.best_mean_bytes = cell.mean_bytes;
                result.best_k_r = k_r;
                result.best_k_c = k_c;
            }
            result.grid.push_back(cell);
        }
    }
    return result;
}

std::uint64_t naive_compressed_bytes(const Table& table, CodecId codec) {
    return codec_encode(codec, table.cells, table.alphabet).size();
}

std::string SweepResult::csv() const {
    std::ostringstream out;
    out << "p0,p1,drr_naive_lz,drr_naive_ans,drr_latent_lz,drr_latent_ans,"
           "theory_drr_opt,theory_drr_fs,theory_drr_lz\n";
    for (const auto& p : points)
        out << p.p0 << ',' << p.p1 << ',' << p.drr_naive_lz << ',' << p.drr_naive_ans << ','
            << p.drr_latent_lz << ',' << p.drr_latent_ans << ',' << p.theory_drr_opt << ','
            << p.theory_drr_fs << ',' << p.theory_drr_lz << '\n';
    return out.str();
}

SweepResult synthetic_sweep(const SweepConfig& config) {
    if (config.p0_grid.empty() || config.p1_grid.empty())
        throw ParamError("synthetic_sweep: empty grid");
    for (double p : config.p0_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw ParamError("synthetic_sweep: p0 outside [0,1]");
    for (double p : config.p1_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw ParamError("synthetic_sweep: p1 outside [0,1]");
    if (config.reps < 1) throw ParamError("synthetic_sweep: reps must be >= 1");

    SweepResult result;
    result.alpha = std::log(double(config.m)) / std::log(double(config.n));
    result.points.resize(config.p0_grid.size() * config.p1_grid.size());

    // Grid points are independent; the output order is the grid order no
    // matter how the loop is scheduled.
    const std::int64_t total = std::int64_t(result.points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t g = 0; g < total; ++g) {
        const std::size_t i0 = std::size_t(g) / config.p1_grid.size();
        const std::size_t i1 = std::size_t(g) % config.p1_grid.size();
        SweepPoint point;
        point.p0 = config.p0_grid[i0];
        point.p1 = config.p1_grid[i1];

        const RatePrediction theory =
            sbm_rate_triple(point.p0, point.p1, config.k, result.alpha);
        point.theory_drr_opt = 1.0 - theory.ideal;
        point.theory_drr_fs = 1.0 - theory.fs_lower;
        point.theory_drr_lz = 1.0 - theory.lz;

        const ModelParams params = sbm_params(point.p0, point.p1, config.k);
        for (std::uint32_t rep = 0; rep < config.reps; ++rep) {
            const std::uint64_t rep_seed =
                rng::derive(config.seed, kSaltRep + std::uint64_t(g) * 1000003ull + rep);
            auto [table, latents] = sample_table(params, config.m, config.n, rep_seed);

            auto add_measured = [&](double& slot, std::uint64_t bytes) {
                slot += drr(bytes, table.m, table.n, table.alphabet) / config.reps;
            };
            if (config.codecs.naive_lz)
                add_measured(point.drr_naive_lz, naive_compressed_bytes(table, CodecId::LZ));
            if (config.codecs.naive_ans)
                add_measured(point.drr_naive_ans, naive_compressed_bytes(table, CodecId::ANS));

            auto latent_config = [&](CodecId codec) {
                CompressConfig c;
                c.block_codec = codec;
                c.latent_codec = codec;
                c.spectral.k_r = std::min(config.k, table.m);
                c.spectral.k_c = std::min(config.k, table.n);
                c.spectral.restarts = config.kmeans_restarts;
                c.spectral.seed = rep_seed;
                return c;
            };
            if (config.codecs.latent_lz)
                add_measured(point.drr_latent_lz,
                             compress(table, latent_config(CodecId::LZ)).size());
            if (config.codecs.latent_ans)
                add_measured(point.drr_latent_ans,
                             compress(table, latent_config(CodecId::ANS)).size());
        }
        result.points[std::size_t(g)] = point;
    }
    return result;
}

}  // namespace latentpack

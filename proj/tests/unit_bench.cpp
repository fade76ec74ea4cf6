#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "latentpack/bench.hpp"

using namespace latentpack;

TEST_CASE("search: recovers the true latent count on separated SBM data") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto [table, truth] = sample_table(sbm_params(0.05, 0.5, 3), 300, 300, 1000 + seed);
        const SearchResult result = search_latent_sizes(table, 1, 6, 1, 6, CodecId::ANS, seed, 2);
        if (result.best_k_r == 3) ++hits;
    }
    CHECK(hits >= 2);
}

TEST_CASE("search: a single grid point returns that point") {
    auto [table, truth] = sample_table(sbm_params(0.2, 0.6, 2), 64, 64, 5);
    const SearchResult result = search_latent_sizes(table, 2, 2, 3, 3, CodecId::ANS, 1, 1);
    CHECK(result.best_k_r == 2);
    CHECK(result.best_k_c == 3);
    CHECK(result.grid.size() == 1);
    CHECK_THROWS_AS(search_latent_sizes(table, 3, 2, 1, 1, CodecId::ANS, 1, 1), ParamError);
}

TEST_CASE("search: DRR is flat across the grid when latents are irrelevant") {
    auto [table, truth] = sample_table(sbm_params(0.3, 0.3, 3), 300, 300, 77);
    const SearchResult result = search_latent_sizes(table, 1, 4, 1, 4, CodecId::ANS, 3, 2);
    double lo = 1e18, hi = -1e18;
    for (const auto& cell : result.grid) {
        lo = std::min(lo, cell.mean_drr);
        hi = std::max(hi, cell.mean_drr);
    }
    CHECK(hi - lo <= 0.02);
}

TEST_CASE("block codec comparison: ANS never trails LZ meaningfully on SBM data") {
    auto [table, truth] = sample_table(sbm_params(0.05, 0.5, 3), 300, 300, 9);
    double drr_by_codec[2];
    for (CodecId codec : {CodecId::ANS, CodecId::LZ}) {
        CompressConfig config;
        config.block_codec = codec;
        config.latent_codec = codec;
        config.spectral.k_r = 3;
        config.spectral.k_c = 3;
        config.spectral.seed = 4;
        drr_by_codec[int(codec)] =
            drr(compress(table, config).size(), table.m, table.n, table.alphabet);
    }
    CHECK(drr_by_codec[int(CodecId::ANS)] >= drr_by_codec[int(CodecId::LZ)] - 0.02);
}

TEST_CASE("sweep: fair-coin point is incompressible and theory DRR is zero") {
    SweepConfig config;
    config.k = 3;
    config.m = 256;
    config.n = 256;
    config.p0_grid = {0.5};
    config.p1_grid = {0.5};
    config.reps = 1;
    config.seed = 11;
    const SweepResult result = synthetic_sweep(config);
    REQUIRE(result.points.size() == 1);
    const SweepPoint& p = result.points[0];
    CHECK(p.theory_drr_opt == doctest::Approx(0.0));
    CHECK(p.theory_drr_fs == doctest::Approx(0.0));
    CHECK(p.theory_drr_lz == doctest::Approx(0.0));
    for (double measured :
         {p.drr_naive_lz, p.drr_naive_ans, p.drr_latent_lz, p.drr_latent_ans}) {
        CHECK(measured >= -0.05);
        CHECK(measured <= 0.05);
    }
}

TEST_CASE("sweep: k in {5,7} smoke grid runs to completion") {
    for (std::uint32_t k : {5u, 7u}) {
        SweepConfig config;
        config.k = k;
        config.m = 128;
        config.n = 128;
        config.p0_grid = {0.1, 0.5};
        config.p1_grid = {0.2, 0.8};
        config.reps = 1;
        config.seed = 21;
        config.codecs.naive_lz = false;  // keep the smoke quick
        config.codecs.latent_lz = false;
        const SweepResult result = synthetic_sweep(config);
        CHECK(result.points.size() == 4);
        for (const auto& p : result.points) {
            CHECK(std::isfinite(p.drr_naive_ans));
            CHECK(std::isfinite(p.drr_latent_ans));
        }
    }
}

TEST_CASE("sweep: theory columns depend only on the grid point") {
    SweepConfig a;
    a.k = 2;
    a.m = 64;
    a.n = 64;
    a.p0_grid = {0.1, 0.4};
    a.p1_grid = {0.6};
    a.reps = 1;
    a.seed = 1;
    SweepConfig b = a;
    b.seed = 999;
    const SweepResult ra = synthetic_sweep(a);
    const SweepResult rb = synthetic_sweep(b);
    REQUIRE(ra.points.size() == rb.points.size());
    for (std::size_t i = 0; i < ra.points.size(); ++i) {
        CHECK(ra.points[i].theory_drr_opt == rb.points[i].theory_drr_opt);
        CHECK(ra.points[i].theory_drr_fs == rb.points[i].theory_drr_fs);
        CHECK(ra.points[i].theory_drr_lz == rb.points[i].theory_drr_lz);
        CHECK(ra.points[i].drr_latent_ans != rb.points[i].drr_latent_ans);
    }
}

TEST_CASE("sweep: alpha follows log m / log n") {
    SweepConfig config;
    config.k = 2;
    config.m = 4096;
    config.n = 64;
    config.p0_grid = {0.5};
    config.p1_grid = {0.5};
    config.reps = 1;
    config.codecs = {false, false, false, false};
    const SweepResult result = synthetic_sweep(config);
    CHECK(result.alpha == doctest::Approx(2.0));
}

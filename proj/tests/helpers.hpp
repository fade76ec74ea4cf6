#pragma once

// Shared test helpers and independent oracles.  The oracles deliberately
// re-derive results by the most direct route available (full enumeration,
// direct definition scans) rather than reusing library internals.

#include <cmath>
#include <cstdint>
#include <vector>

#include "latentpack/codecs.hpp"
#include "latentpack/model.hpp"
#include "latentpack/rng.hpp"

namespace test_helpers {

using latentpack::Alphabet;
using latentpack::LzToken;
using latentpack::ModelParams;
using latentpack::Symbol;
using latentpack::Table;

// Exact log-probability by enumerating BOTH row and column assignments in
// linear space (long double).
inline double brute_force_log_prob(const ModelParams& params, const Table& table) {
    const std::uint32_t m = table.m, n = table.n;
    const std::uint32_t kr = params.latent_size_r, kc = params.latent_size_c;
    std::vector<std::uint32_t> u(m, 0), v(n, 0);
    long double total = 0.0L;
    while (true) {
        while (true) {
            long double p = 1.0L;
            for (std::uint32_t i = 0; i < m; ++i) p *= params.q_row[u[i]];
            for (std::uint32_t j = 0; j < n; ++j) p *= params.q_col[v[j]];
            for (std::uint32_t i = 0; i < m; ++i)
                for (std::uint32_t j = 0; j < n; ++j) p *= params.q_cond(u[i], v[j], table.at(i, j));
            total += p;

            std::uint32_t pos = 0;
            while (pos < n && ++v[pos] == kc) v[pos++] = 0;
            if (pos == n) break;
        }
        std::uint32_t pos = 0;
        while (pos < m && ++u[pos] == kr) u[pos++] = 0;
        if (pos == m) break;
    }
    return double(std::log(total));
}

// Quadratic-time reference parse evaluating the greedy longest-match
// definitions directly: L is the largest ell with any earlier occurrence,
// the pointer is the most recent start among the maximizers.
inline std::vector<LzToken> reference_lz_parse(std::span<const Symbol> seq) {
    const std::size_t n = seq.size();
    std::vector<LzToken> tokens;
    std::size_t k = 0;
    while (k < n) {
        bool seen = false;
        for (std::size_t j = 0; j < k && !seen; ++j) seen = seq[j] == seq[k];
        if (!seen) {
            tokens.push_back({-std::int64_t(seq[k]), 1});
            k += 1;
            continue;
        }
        std::size_t best_len = 0;
        for (std::size_t ell = 1; k + ell - 1 < n; ++ell) {
            bool exists = false;
            for (std::size_t j = 0; j < k && !exists; ++j) {
                bool match = true;
                for (std::size_t t = 0; t < ell && match; ++t) match = seq[j + t] == seq[k + t];
                exists = match;
            }
            if (!exists) break;
            best_len = ell;
        }
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            bool match = true;
            for (std::size_t t = 0; t < best_len && match; ++t) match = seq[j + t] == seq[k + t];
            if (match) best_j = j;  // ascending scan keeps the largest j
        }
        tokens.push_back({std::int64_t(best_j) + 1, best_len});
        k += best_len;
    }
    return tokens;
}

// Random model with the given shape; probability vectors are normalized
// uniforms, optionally bounded away from 0.
inline ModelParams random_params(std::uint32_t k_r, std::uint32_t k_c, std::uint32_t x_size,
                                 std::uint64_t seed, double floor_mass = 0.0) {
    latentpack::rng::Stream stream(seed);
    auto random_dist = [&](std::uint32_t size) {
        std::vector<double> p(size);
        double sum = 0.0;
        for (double& v : p) {
            v = floor_mass + stream.next_real();
            sum += v;
        }
        for (double& v : p) v /= sum;
        return p;
    };

    ModelParams params;
    params.latent_size_r = k_r;
    params.latent_size_c = k_c;
    params.alphabet = Alphabet{x_size};
    params.q_row = random_dist(k_r);
    params.q_col = random_dist(k_c);
    params.q.resize(std::size_t(k_r) * k_c * x_size);
    for (std::uint32_t u = 0; u < k_r; ++u) {
        for (std::uint32_t v = 0; v < k_c; ++v) {
            const auto dist = random_dist(x_size);
            for (std::uint32_t x = 0; x < x_size; ++x)
                params.q[(std::size_t(u) * k_c + v) * x_size + x] = dist[x];
        }
    }
    return params;
}

inline Table make_table(std::uint32_t m, std::uint32_t n, std::uint32_t x_size,
                        std::vector<Symbol> cells) {
    Table t;
    t.m = m;
    t.n = n;
    t.alphabet = Alphabet{x_size};
    t.cells = std::move(cells);
    return t;
}

inline std::vector<Symbol> random_symbols(std::size_t count, std::uint32_t x_size,
                                          std::uint64_t seed) {
    std::vector<Symbol> seq(count);
    latentpack::rng::Stream stream(seed);
    for (auto& s : seq) s = static_cast<Symbol>(stream.next_below(x_size));
    return seq;
}

}  // namespace test_helpers

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "latentpack/table.hpp"

namespace latentpack {

// Conditional cell law Q(x|u,v) plus the latent priors q_r, q_c.
struct ModelParams {
    std::uint32_t latent_size_r = 1;
    std::uint32_t latent_size_c = 1;
    Alphabet alphabet;
    std::vector<double> q;      // [(u*latent_size_c + v)*|X| + x]
    std::vector<double> q_row;  // length latent_size_r
    std::vector<double> q_col;  // length latent_size_c

    double q_cond(std::uint32_t u, std::uint32_t v, std::uint32_t x) const {
        return q[(std::size_t(u) * latent_size_c + v) * alphabet.size + x];
    }
    std::span<const double> q_vec(std::uint32_t u, std::uint32_t v) const {
        return {q.data() + (std::size_t(u) * latent_size_c + v) * alphabet.size, alphabet.size};
    }
    void validate() const;
};

struct SBMParams {
    double p0 = 0.0;
    double p1 = 0.0;
    std::uint32_t k = 1;
};

// Symmetric Binary Model: binary alphabet, uniform latents over k labels,
// Q(1|u,u) = p1 and Q(1|u,v!=u) = p0.
ModelParams sbm_params(double p0, double p1, std::uint32_t k);
inline ModelParams sbm_params(const SBMParams& p) { return sbm_params(p.p0, p.p1, p.k); }

// Draws (table, latents): labels i.i.d. from the priors, cells conditionally
// independent given the labels.  Deterministic for a fixed seed.
std::pair<Table, LatentAssignment> sample_table(const ModelParams& params, std::uint32_t m,
                                                std::uint32_t n, std::uint64_t seed);

// Natural log of the exact marginal probability of `table`, by exhaustive
// summation over latent assignments.  Tiny instances only; throws
// CapacityError when |L_r|^m * |L_c|^n > 1e7.
double exact_log_prob(const ModelParams& params, const Table& table);

// H(X^{m,n}) in bits by enumerating every table.  Throws CapacityError when
// |X|^(m*n) > 1e7.
double exact_table_entropy(const ModelParams& params, std::uint32_t m, std::uint32_t n);

// Empirical conditional frequencies per latent block, and the empirical
// latent marginals.  Blocks with no cells are flagged empty, not invented.
struct BlockFrequencies {
    std::uint32_t k_r = 0;
    std::uint32_t k_c = 0;
    Alphabet alphabet;
    std::vector<std::vector<std::uint64_t>> counts;  // [u*k_c+v][x]
    std::vector<std::uint64_t> totals;               // N(u,v)
    std::vector<double> q_row_hat;
    std::vector<double> q_col_hat;

    bool empty_block(std::uint32_t u, std::uint32_t v) const {
        return totals[std::size_t(u) * k_c + v] == 0;
    }
    // Q-hat(.|u,v); throws ParamError on an empty block.
    std::vector<double> q_hat(std::uint32_t u, std::uint32_t v) const;
};

BlockFrequencies empirical_block_freqs(const Table& table, const LatentAssignment& latents);

}  // namespace latentpack

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latentpack/model.hpp"

namespace latentpack {

// Closed-form compression-rate predictions.  All rates are per-symbol
// fractions normalized by log2 |X|; entropies are in bits throughout.

// h(eps), with h(0) = h(1) = 0 by continuity.
double binary_entropy(double eps);

// Shannon entropy of a probability vector, 0*log 0 = 0.
double entropy(std::span<const double> p);

// H(X|U,V) = sum_{u,v} q_r(u) q_c(v) H(Q(.|u,v)).
double cond_entropy_xuv(const ModelParams& params);
// H(X|U) = sum_u q_r(u) H(sum_v q_c(v) Q(.|u,v)).
double cond_entropy_xu(const ModelParams& params);
// Inner summands of the two above.
double cond_entropy_xu_given_u(const ModelParams& params, std::uint32_t u);
double cond_entropy_xuv_given_u(const ModelParams& params, std::uint32_t u);

struct RateValue {
    double clamped = 0.0;  // raw clamped into [0,1]
    double raw = 0.0;
};

// (H(X|U,V) + H(U)/n + H(V)/m + 1/(mn)) / log2|X|.
RateValue ideal_rate(const ModelParams& params, std::uint32_t m, std::uint32_t n);

// Finite-state lower bound: leading term H(X|U)/log2|X| minus the
// square-root correction.  The correction's inner logs are natural; the
// rate comparison code uses only the leading term.
struct FsBound {
    double bound = 0.0;    // max(0, leading - correction)
    double leading = 0.0;  // H(X|U) / log2|X|
    double correction = 0.0;
};
FsBound fs_lower_bound(const ModelParams& params, std::uint64_t sigma_size, std::uint32_t n);

// sum_u q_r(u) min(H(X|U=u), ((1+alpha)/alpha) H(X|U=u,V)) / log2|X|.
double lz_asymptotic_rate(const ModelParams& params, double alpha);

// Regime threshold H(X|U=u,V)/(H(X|U=u) - H(X|U=u,V)); +inf when the two
// entropies coincide.
double alpha_star(const ModelParams& params, std::uint32_t u);

// Fano correction delta(eps) = h(eps) + eps log2(|L|-1); 0 when |L| = 1.
double fano_delta(double eps, std::uint32_t latent_size);

struct RatePrediction {
    double ideal = 0.0;
    double fs_lower = 0.0;
    double lz = 0.0;
    double alpha = 1.0;
    double ideal_raw = 0.0;
    double fs_lower_raw = 0.0;
    double lz_raw = 0.0;
};

// The three SBM rate formulas: opt = (1-1/k)h(p0) + (1/k)h(p1),
// fs = h(pbar) with pbar = ((k-1)p0 + p1)/k, lz = fs ^ ((1+a)/a)*opt.
RatePrediction sbm_rate_triple(double p0, double p1, std::uint32_t k, double alpha);

enum class Coder { LZ, AC, ANS };

// Documented additive constant of the rANS implementation, in bits; see
// FORMATS.md.  The measured slack stays well under this.
inline constexpr double kAnsRedundancyConstBits = 512.0;

struct RedundancyBound {
    double value = 0.0;
    bool applicable = true;  // false for LZ below its validity threshold
};

// Worst-case per-symbol redundancy of the base coders over i.i.d. sources
// with distributions in `dists`.  AC/ANS formulas use base-2 logs; the LZ
// constant c* and its validity threshold use natural logs.
RedundancyBound redundancy_bound(Coder coder, std::uint64_t n, const Alphabet& alphabet,
                                 const std::vector<std::vector<double>>& dists);

}  // namespace latentpack

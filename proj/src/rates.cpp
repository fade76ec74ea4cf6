#include "latentpack/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latentpack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Column-marginalized cell law given the row latent:
// Q_{x|u}(.|u) = sum_v q_c(v) Q(.|u,v).
std::vector<double> row_marginal(const ModelParams& params, std::uint32_t u) {
    std::vector<double> p(params.alphabet.size, 0.0);
    for (std::uint32_t v = 0; v < params.latent_size_c; ++v) {
        const auto qv = params.q_vec(u, v);
        for (std::uint32_t x = 0; x < params.alphabet.size; ++x) p[x] += params.q_col[v] * qv[x];
    }
    return p;
}

}  // namespace

double binary_entropy(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw ParamError("binary_entropy: eps outside [0,1]");
    if (eps == 0.0 || eps == 1.0) return 0.0;
    return -eps * std::log2(eps) - (1.0 - eps) * std::log2(1.0 - eps);
}

double entropy(std::span<const double> p) {
    double sum = 0.0;
    double h = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw ParamError("entropy: negative entry");
        sum += x;
        if (x > 0.0) h -= x * std::log2(x);
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ParamError("entropy: vector does not sum to 1");
    return h;
}

double cond_entropy_xuv_given_u(const ModelParams& params, std::uint32_t u) {
    if (u >= params.latent_size_r) throw ParamError("cond_entropy: latent out of range");
    double h = 0.0;
    for (std::uint32_t v = 0; v < params.latent_size_c; ++v)
        h += params.q_col[v] * entropy(params.q_vec(u, v));
    return h;
}

double cond_entropy_xu_given_u(const ModelParams& params, std::uint32_t u) {
    if (u >= params.latent_size_r) throw ParamError("cond_entropy: latent out of range");
    return entropy(row_marginal(params, u));
}

double cond_entropy_xuv(const ModelParams& params) {
    params.validate();
    double h = 0.0;
    for (std::uint32_t u = 0; u < params.latent_size_r; ++u)
        h += params.q_row[u] * cond_entropy_xuv_given_u(params, u);
    return h;
}

double cond_entropy_xu(const ModelParams& params) {
    params.validate();
    double h = 0.0;
    for (std::uint32_t u = 0; u < params.latent_size_r; ++u)
        h += params.q_row[u] * cond_entropy_xu_given_u(params, u);
    return h;
}

RateValue ideal_rate(const ModelParams& params, std::uint32_t m, std::uint32_t n) {
    params.validate();
    if (m < 1 || n < 1) throw ParamError("ideal_rate: m, n must be >= 1");
    const double log2x = params.alphabet.bits_per_symbol();
    if (log2x == 0.0) throw ParamError("ideal_rate: one-symbol alphabet");
    const double hu = entropy(params.q_row);
    const double hv = entropy(params.q_col);
    const double raw =
        (cond_entropy_xuv(params) + hu / n + hv / m + 1.0 / (double(m) * n)) / log2x;
    return {clamp01(raw), raw};
}

FsBound fs_lower_bound(const ModelParams& params, std::uint64_t sigma_size, std::uint32_t n) {
    params.validate();
    if (sigma_size < params.alphabet.size)
        throw ParamError("fs_lower_bound: |Sigma| must be >= |X|");
    if (n < 1) throw ParamError("fs_lower_bound: n must be >= 1");
    const double log2x = params.alphabet.bits_per_symbol();
    if (log2x == 0.0) throw ParamError("fs_lower_bound: one-symbol alphabet");

    FsBound out;
    out.leading = cond_entropy_xu(params) / log2x;
    const double log_sigma = std::log(double(sigma_size));
    const double log_x = std::log(double(params.alphabet.size));
    out.correction =
        10.0 * std::sqrt(log_sigma / (double(n) * log_x)) * std::log(double(n) * log_sigma);
    out.bound = std::max(0.0, out.leading - out.correction);
    return out;
}

double lz_asymptotic_rate(const ModelParams& params, double alpha) {
    params.validate();
    if (!(alpha > 0.0)) throw ParamError("lz_asymptotic_rate: alpha must be > 0");
    const double log2x = params.alphabet.bits_per_symbol();
    if (log2x == 0.0) throw ParamError("lz_asymptotic_rate: one-symbol alphabet");
    const double factor = (1.0 + alpha) / alpha;
    double rate = 0.0;
    for (std::uint32_t u = 0; u < params.latent_size_r; ++u) {
        const double hu = cond_entropy_xu_given_u(params, u);
        const double huv = cond_entropy_xuv_given_u(params, u);
        rate += params.q_row[u] * std::min(hu, factor * huv);
    }
    return rate / log2x;
}

double alpha_star(const ModelParams& params, std::uint32_t u) {
    params.validate();
    if (u >= params.latent_size_r) throw ParamError("alpha_star: latent out of range");
    const double hu = cond_entropy_xu_given_u(params, u);
    const double huv = cond_entropy_xuv_given_u(params, u);
    const double gap = hu - huv;
    if (gap <= 0.0) return kInf;
    return huv / gap;
}

double fano_delta(double eps, std::uint32_t latent_size) {
    if (latent_size < 1) throw ParamError("fano_delta: latent size must be >= 1");
    if (latent_size == 1) return 0.0;
    return binary_entropy(eps) + eps * std::log2(double(latent_size - 1));
}

RatePrediction sbm_rate_triple(double p0, double p1, std::uint32_t k, double alpha) {
    if (!(alpha > 0.0)) throw ParamError("sbm_rate_triple: alpha must be > 0");
    if (k < 1) throw ParamError("sbm_rate_triple: k must be >= 1");
    if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0))
        throw ParamError("sbm_rate_triple: probabilities must lie in [0,1]");
    const double frac = 1.0 / double(k);
    const double h_bar = (1.0 - frac) * binary_entropy(p0) + frac * binary_entropy(p1);
    const double p_bar = (1.0 - frac) * p0 + frac * p1;

    RatePrediction pred;
    pred.alpha = alpha;
    pred.ideal_raw = h_bar;
    pred.fs_lower_raw = binary_entropy(p_bar);
    pred.lz_raw = std::min(pred.fs_lower_raw, (1.0 + alpha) / alpha * h_bar);
    pred.ideal = clamp01(pred.ideal_raw);
    pred.fs_lower = clamp01(pred.fs_lower_raw);
    pred.lz = clamp01(pred.lz_raw);
    return pred;
}

RedundancyBound redundancy_bound(Coder coder, std::uint64_t n, const Alphabet& alphabet,
                                 const std::vector<std::vector<double>>& dists) {
    alphabet.validate();
    if (n < 2) throw ParamError("redundancy_bound: N must be >= 2");
    const double N = double(n);
    const double x_size = double(alphabet.size);

    switch (coder) {
        case Coder::AC:
            return {2.0 * x_size / std::log2(x_size) * std::log2(N) / N, true};
        case Coder::ANS:
            return {(2.0 * x_size * std::log2(N) + kAnsRedundancyConstBits) / N, true};
        case Coder::LZ: {
            // c* and the validity threshold; zero-probability symbols are
            // dropped (they can be removed from the alphabet).
            double c_star = 0.0;
            double threshold = 0.0;
            for (const auto& q : dists) {
                double acc = 0.0;
                for (double p : q) {
                    if (p > 0.0) {
                        const double lg = std::log(p);
                        acc += lg * lg;
                    }
                }
                c_star = std::max(c_star, acc / x_size);
                const double h = entropy(q);
                if (h <= 0.0) return {0.0, false};
                const double t = 4.0 * std::log(2.0 / h);
                threshold = std::max(threshold, std::exp(t * t));
            }
            if (N < threshold) return {0.0, false};
            return {40.0 * c_star * std::sqrt(std::log(std::log(N)) / std::log(N)), true};
        }
    }
    throw ParamError("redundancy_bound: unknown coder");
}

}  // namespace latentpack

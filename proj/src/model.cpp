#include "latentpack/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latentpack/kernels.hpp"
#include "latentpack/rng.hpp"

namespace latentpack {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kOracleCap = 1e7;

// Sub-stream salts for sample_table.
constexpr std::uint64_t kSaltRows = 0x726f7773;   // "rows"
constexpr std::uint64_t kSaltCols = 0x636f6c73;   // "cols"
constexpr std::uint64_t kSaltCells = 0x63656c6c;  // "cell"

void check_prob_vector(std::span<const double> p, const char* what) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw ParamError(std::string(what) + ": negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
        throw ParamError(std::string(what) + ": does not sum to 1");
}

double log_sum_exp(std::span<const double> xs) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : xs) hi = std::max(hi, x);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - hi);
    return hi + std::log(acc);
}

}  // namespace

void ModelParams::validate() const {
    alphabet.validate();
    if (latent_size_r < 1 || latent_size_c < 1)
        throw ParamError("model: latent sizes must be >= 1");
    if (q_row.size() != latent_size_r || q_col.size() != latent_size_c)
        throw ParamError("model: prior size mismatch");
    if (q.size() != std::size_t(latent_size_r) * latent_size_c * alphabet.size)
        throw ParamError("model: Q size mismatch");
    check_prob_vector(q_row, "q_r");
    check_prob_vector(q_col, "q_c");
    for (std::uint32_t u = 0; u < latent_size_r; ++u)
        for (std::uint32_t v = 0; v < latent_size_c; ++v) check_prob_vector(q_vec(u, v), "Q(.|u,v)");
}

ModelParams sbm_params(double p0, double p1, std::uint32_t k) {
    if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0))
        throw ParamError("sbm: probabilities must lie in [0,1]");
    if (k < 1) throw ParamError("sbm: k must be >= 1");
    ModelParams params;
    params.latent_size_r = k;
    params.latent_size_c = k;
    params.alphabet = Alphabet{2};
    params.q_row.assign(k, 1.0 / k);
    params.q_col.assign(k, 1.0 / k);
    params.q.resize(std::size_t(k) * k * 2);
    for (std::uint32_t u = 0; u < k; ++u) {
        for (std::uint32_t v = 0; v < k; ++v) {
            const double p = (u == v) ? p1 : p0;
            params.q[(std::size_t(u) * k + v) * 2 + 0] = 1.0 - p;
            params.q[(std::size_t(u) * k + v) * 2 + 1] = p;
        }
    }
    return params;
}

std::pair<Table, LatentAssignment> sample_table(const ModelParams& params, std::uint32_t m,
                                                std::uint32_t n, std::uint64_t seed) {
    params.validate();
    if (m < 1 || n < 1) throw ParamError("sample_table: m, n must be >= 1");

    LatentAssignment latents;
    latents.latent_size_r = params.latent_size_r;
    latents.latent_size_c = params.latent_size_c;
    latents.rows.resize(m);
    latents.cols.resize(n);
    const std::uint64_t row_seed = rng::derive(seed, kSaltRows);
    const std::uint64_t col_seed = rng::derive(seed, kSaltCols);
    for (std::uint32_t i = 0; i < m; ++i)
        latents.rows[i] =
            static_cast<std::uint32_t>(rng::inverse_cdf(params.q_row, rng::unit_real(row_seed, i)));
    for (std::uint32_t j = 0; j < n; ++j)
        latents.cols[j] =
            static_cast<std::uint32_t>(rng::inverse_cdf(params.q_col, rng::unit_real(col_seed, j)));

    Table table;
    table.m = m;
    table.n = n;
    table.alphabet = params.alphabet;
    table.cells.resize(std::size_t(m) * n);
    kernels::sample_cells(params, latents.rows.data(), m, latents.cols.data(), n,
                          rng::derive(seed, kSaltCells), 0, table.cells.data());
    return {std::move(table), std::move(latents)};
}

double exact_log_prob(const ModelParams& params, const Table& table) {
    params.validate();
    table.validate();
    if (table.alphabet.size != params.alphabet.size)
        throw ParamError("exact_log_prob: alphabet mismatch");
    const std::uint32_t m = table.m, n = table.n;
    const std::uint32_t kr = params.latent_size_r, kc = params.latent_size_c;

    double work = std::pow(double(kr), double(m)) * std::pow(double(kc), double(n));
    if (!(work <= kOracleCap)) throw CapacityError("exact_log_prob: instance too large");

    // Row assignments are enumerated exhaustively; for each one the sum over
    // column assignments factorizes per column, so each column contributes a
    // log-sum-exp over its latent value.
    std::vector<double> log_q(params.q.size());
    for (std::size_t t = 0; t < params.q.size(); ++t) log_q[t] = std::log(params.q[t]);
    std::vector<double> log_qr(kr), log_qc(kc);
    for (std::uint32_t u = 0; u < kr; ++u) log_qr[u] = std::log(params.q_row[u]);
    for (std::uint32_t v = 0; v < kc; ++v) log_qc[v] = std::log(params.q_col[v]);

    std::vector<std::uint32_t> u_vec(m, 0);
    std::vector<double> terms;
    std::vector<double> col_terms(kc);
    while (true) {
        double lp = 0.0;
        for (std::uint32_t i = 0; i < m; ++i) lp += log_qr[u_vec[i]];
        for (std::uint32_t j = 0; j < n; ++j) {
            for (std::uint32_t v = 0; v < kc; ++v) {
                double s = log_qc[v];
                for (std::uint32_t i = 0; i < m; ++i)
                    s += log_q[(std::size_t(u_vec[i]) * kc + v) * params.alphabet.size +
                               table.at(i, j)];
                col_terms[v] = s;
            }
            lp += log_sum_exp(col_terms);
        }
        terms.push_back(lp);

        // next row assignment in odometer order
        std::uint32_t pos = 0;
        while (pos < m && ++u_vec[pos] == kr) u_vec[pos++] = 0;
        if (pos == m) break;
    }
    return log_sum_exp(terms);
}

double exact_table_entropy(const ModelParams& params, std::uint32_t m, std::uint32_t n) {
    params.validate();
    if (m < 1 || n < 1) throw ParamError("exact_table_entropy: m, n must be >= 1");
    const double count = std::pow(double(params.alphabet.size), double(m) * n);
    if (!(count <= kOracleCap)) throw CapacityError("exact_table_entropy: instance too large");

    Table table;
    table.m = m;
    table.n = n;
    table.alphabet = params.alphabet;
    table.cells.assign(std::size_t(m) * n, 0);

    double entropy_bits = 0.0;
    while (true) {
        const double lp = exact_log_prob(params, table);
        const double p = std::exp(lp);
        if (p > 0.0) entropy_bits -= p * lp;

        std::size_t pos = 0;
        while (pos < table.cells.size() && ++table.cells[pos] == params.alphabet.size)
            table.cells[pos++] = 0;
        if (pos == table.cells.size()) break;
    }
    return entropy_bits / std::log(2.0);
}

std::vector<double> BlockFrequencies::q_hat(std::uint32_t u, std::uint32_t v) const {
    const std::size_t idx = std::size_t(u) * k_c + v;
    if (totals[idx] == 0) throw ParamError("q_hat: empty block");
    std::vector<double> p(alphabet.size);
    for (std::uint32_t x = 0; x < alphabet.size; ++x)
        p[x] = double(counts[idx][x]) / double(totals[idx]);
    return p;
}

BlockFrequencies empirical_block_freqs(const Table& table, const LatentAssignment& latents) {
    table.validate();
    latents.validate();
    if (latents.rows.size() != table.m || latents.cols.size() != table.n)
        throw ParamError("empirical_block_freqs: latent dimensions do not match table");

    BlockFrequencies f;
    f.k_r = latents.latent_size_r;
    f.k_c = latents.latent_size_c;
    f.alphabet = table.alphabet;
    f.counts.assign(std::size_t(f.k_r) * f.k_c, std::vector<std::uint64_t>(f.alphabet.size, 0));
    f.totals.assign(std::size_t(f.k_r) * f.k_c, 0);

    for (std::uint32_t i = 0; i < table.m; ++i) {
        const std::uint32_t u = latents.rows[i];
        for (std::uint32_t j = 0; j < table.n; ++j) {
            const std::size_t idx = std::size_t(u) * f.k_c + latents.cols[j];
            ++f.counts[idx][table.at(i, j)];
            ++f.totals[idx];
        }
    }

    f.q_row_hat.assign(f.k_r, 0.0);
    f.q_col_hat.assign(f.k_c, 0.0);
    for (auto u : latents.rows) f.q_row_hat[u] += 1.0 / double(table.m);
    for (auto v : latents.cols) f.q_col_hat[v] += 1.0 / double(table.n);
    return f;
}

}  // namespace latentpack

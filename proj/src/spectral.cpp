#include "latentpack/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latentpack/kernels.hpp"
#include "latentpack/rng.hpp"

namespace latentpack {

namespace {

constexpr std::uint64_t kSaltSvdInit = 0x73766431;    // "svd1"
constexpr std::uint64_t kSaltKMeans = 0x6b6d6e73;     // "kmns"
constexpr std::uint64_t kSaltSubsample = 0x73756273;  // "subs"
constexpr std::uint64_t kSaltRowsCluster = 0x636c7572;
constexpr std::uint64_t kSaltColsCluster = 0x636c7563;

constexpr std::uint32_t kMaxLloydSteps = 100;

// Modified Gram-Schmidt on the columns of a row-major rows x r block.
// Columns that vanish (rank deficiency) are replaced by seeded random
// directions orthogonal to the rest, so downstream code always sees an
// orthonormal frame.
void orthonormalize_columns(RealMatrix& a, std::uint64_t fill_seed) {
    const std::size_t rows = a.rows, r = a.cols;
    rng::Stream fill(fill_seed);
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t attempt = 0;; ++attempt) {
            for (std::size_t prev = 0; prev < c; ++prev) {
                double dot = 0.0;
                for (std::size_t i = 0; i < rows; ++i) dot += a.at(i, prev) * a.at(i, c);
                for (std::size_t i = 0; i < rows; ++i) a.at(i, c) -= dot * a.at(i, prev);
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < rows; ++i) norm += a.at(i, c) * a.at(i, c);
            norm = std::sqrt(norm);
            if (norm > 1e-12 || attempt > 2) {
                const double inv = norm > 0.0 ? 1.0 / norm : 0.0;
                for (std::size_t i = 0; i < rows; ++i) a.at(i, c) *= inv;
                break;
            }
            for (std::size_t i = 0; i < rows; ++i) a.at(i, c) = fill.next_normal();
        }
    }
}

double squared_distance(const double* a, const double* b, std::size_t dim) {
    double d = 0.0;
    for (std::size_t t = 0; t < dim; ++t) {
        const double diff = a[t] - b[t];
        d += diff * diff;
    }
    return d;
}

// Cyclic Jacobi eigensolver for a small symmetric matrix; returns
// eigenvalues in `a`'s diagonal slots and accumulates rotations in `vecs`.
void jacobi_eigen_sym(std::vector<double>& a, std::size_t r, std::vector<double>& vecs) {
    vecs.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) vecs[i * r + i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = p + 1; q < r; ++q) off += a[p * r + q] * a[p * r + q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < r; ++p) {
            for (std::size_t q = p + 1; q < r; ++q) {
                const double apq = a[p * r + q];
                if (apq == 0.0) continue;
                const double diff = a[q * r + q] - a[p * r + p];
                double t;
                if (std::abs(apq) < 1e-20 * std::abs(diff)) {
                    t = apq / diff;
                } else {
                    const double theta = diff / (2.0 * apq);
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < r; ++i) {
                    const double aip = a[i * r + p], aiq = a[i * r + q];
                    a[i * r + p] = c * aip - s * aiq;
                    a[i * r + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < r; ++i) {
                    const double api = a[p * r + i], aqi = a[q * r + i];
                    a[p * r + i] = c * api - s * aqi;
                    a[q * r + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < r; ++i) {
                    const double vip = vecs[i * r + p], viq = vecs[i * r + q];
                    vecs[i * r + p] = c * vip - s * viq;
                    vecs[i * r + q] = s * vip + c * viq;
                }
            }
        }
    }
}

struct DisjointSets {
    std::vector<std::uint32_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

void EmbeddingMap::validate(const Alphabet& alphabet) const {
    if (psi.size() != alphabet.size) throw ParamError("embedding: psi not defined on all of X");
    for (double v : psi) {
        if (!(std::abs(v) <= 1.0)) throw ParamError("embedding: |psi(x)| must be <= 1");
    }
}

EmbeddingMap EmbeddingMap::default_map(const Alphabet& alphabet) {
    alphabet.validate();
    EmbeddingMap map;
    map.psi.resize(alphabet.size, 0.0);
    if (alphabet.size > 1) {
        for (std::uint32_t x = 0; x < alphabet.size; ++x)
            map.psi[x] = 2.0 * x / (alphabet.size - 1.0) - 1.0;
    }
    return map;
}

void SpectralConfig::validate() const {
    if (k_r < 1 || k_c < 1) throw ParamError("spectral: latent counts must be >= 1");
    if (!(row_subsample > 0.0 && row_subsample <= 1.0))
        throw ParamError("spectral: row_subsample must be in (0,1]");
    if (method == ClusterMethod::Threshold && !(theta > 0.0))
        throw ParamError("spectral: theta must be > 0");
}

RealMatrix embed(const Table& table, const EmbeddingMap& psi) {
    table.validate();
    psi.validate(table.alphabet);
    RealMatrix m;
    m.rows = table.m;
    m.cols = table.n;
    m.data.resize(std::size_t(table.m) * table.n);
    for (std::size_t t = 0; t < m.data.size(); ++t) m.data[t] = psi.psi[table.cells[t]];
    return m;
}

SvdResult top_singular_vectors(const RealMatrix& m, std::uint32_t r, std::uint32_t iters,
                               std::uint64_t seed) {
    if (r < 1 || r > std::min(m.rows, m.cols))
        throw ParamError("top_singular_vectors: r outside [1, min(m,n)]");

    const std::size_t rows = m.rows, cols = m.cols;
    RealMatrix b{cols, r, std::vector<double>(cols * r)};
    rng::Stream init(rng::derive(seed, kSaltSvdInit));
    for (double& v : b.data) v = init.next_normal();
    orthonormalize_columns(b, rng::derive(seed, kSaltSvdInit + 1));

    RealMatrix a{rows, r, std::vector<double>(rows * r)};
    for (std::uint32_t it = 0; it < iters; ++it) {
        kernels::matmul_mb(m.data.data(), rows, cols, b.data.data(), r, a.data.data());
        orthonormalize_columns(a, rng::derive(seed, kSaltSvdInit + 2 + 2 * it));
        kernels::matmul_mtb(m.data.data(), rows, cols, a.data.data(), r, b.data.data());
        orthonormalize_columns(b, rng::derive(seed, kSaltSvdInit + 3 + 2 * it));
    }

    // Rayleigh-Ritz extraction: eigensolve the small Gram matrix of W = M*B.
    // Ritz values converge quadratically in the subspace error, which keeps
    // near-equal singular values accurate.
    RealMatrix w{rows, r, std::vector<double>(rows * r)};
    kernels::matmul_mb(m.data.data(), rows, cols, b.data.data(), r, w.data.data());
    std::vector<double> gram(r * r, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t a1 = 0; a1 < r; ++a1)
            for (std::size_t a2 = a1; a2 < r; ++a2) gram[a1 * r + a2] += w.at(i, a1) * w.at(i, a2);
    for (std::size_t a1 = 0; a1 < r; ++a1)
        for (std::size_t a2 = 0; a2 < a1; ++a2) gram[a1 * r + a2] = gram[a2 * r + a1];

    std::vector<double> rot;
    jacobi_eigen_sym(gram, r, rot);
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return gram[x * r + x] > gram[y * r + y];
    });

    SvdResult sorted;
    sorted.left = RealMatrix{rows, r, std::vector<double>(rows * r, 0.0)};
    sorted.right = RealMatrix{cols, r, std::vector<double>(cols * r, 0.0)};
    sorted.sigma.resize(r);
    for (std::size_t c = 0; c < r; ++c) {
        const std::size_t src = order[c];
        sorted.sigma[c] = std::sqrt(std::max(gram[src * r + src], 0.0));
        for (std::size_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < r; ++t) acc += b.at(j, t) * rot[t * r + src];
            sorted.right.at(j, c) = acc;
        }
        const double inv = sorted.sigma[c] > 1e-12 ? 1.0 / sorted.sigma[c] : 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double acc = 0.0;
            for (std::size_t t = 0; t < r; ++t) acc += w.at(i, t) * rot[t * r + src];
            sorted.left.at(i, c) = acc * inv;
        }
    }
    // rank-deficient directions keep an orthonormal (if arbitrary) frame
    orthonormalize_columns(sorted.left, rng::derive(seed, kSaltSvdInit + 9999));

    // residual ||M^T A - B diag(sigma)||_F
    RealMatrix mta{cols, r, std::vector<double>(cols * r)};
    kernels::matmul_mtb(m.data.data(), rows, cols, sorted.left.data.data(), r, mta.data.data());
    double res = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t c = 0; c < r; ++c) {
            const double diff = mta.at(j, c) - sorted.right.at(j, c) * sorted.sigma[c];
            res += diff * diff;
        }
    }
    sorted.residual = std::sqrt(res);
    return sorted;
}

KMeansResult kmeans(const RealMatrix& points, std::uint32_t k, std::uint32_t restarts,
                    std::uint64_t seed) {
    const std::size_t count = points.rows, dim = points.cols;
    if (k < 1) throw ParamError("kmeans: k must be >= 1");
    if (count < k) throw ParamError("kmeans: fewer points than clusters");
    if (restarts < 1) restarts = 1;

    KMeansResult best;
    best.wcss = std::numeric_limits<double>::infinity();

    std::vector<double> centroids(std::size_t(k) * dim);
    std::vector<std::uint32_t> labels(count);
    std::vector<std::uint32_t> prev_labels(count);
    std::vector<std::size_t> sizes(k);

    for (std::uint32_t restart = 0; restart < restarts; ++restart) {
        rng::Stream stream(rng::derive(seed, kSaltKMeans + restart));

        // Forgy init: k distinct point indices.
        std::vector<std::size_t> pick(count);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        for (std::uint32_t c = 0; c < k; ++c) {
            const std::size_t swap_with = c + std::size_t(stream.next_below(count - c));
            std::swap(pick[c], pick[swap_with]);
            for (std::size_t t = 0; t < dim; ++t)
                centroids[std::size_t(c) * dim + t] = points.at(pick[c], t);
        }

        std::fill(prev_labels.begin(), prev_labels.end(), k);  // invalid label
        for (std::uint32_t step = 0; step < kMaxLloydSteps; ++step) {
            kernels::assign_nearest(points.data.data(), count, dim, centroids.data(), k,
                                    labels.data());

            // centroid update (serial, so results do not depend on threads)
            std::fill(centroids.begin(), centroids.end(), 0.0);
            std::fill(sizes.begin(), sizes.end(), 0);
            for (std::size_t i = 0; i < count; ++i) {
                ++sizes[labels[i]];
                for (std::size_t t = 0; t < dim; ++t)
                    centroids[std::size_t(labels[i]) * dim + t] += points.at(i, t);
            }
            for (std::uint32_t c = 0; c < k; ++c) {
                if (sizes[c] == 0) continue;
                for (std::size_t t = 0; t < dim; ++t)
                    centroids[std::size_t(c) * dim + t] /= double(sizes[c]);
            }

            // reseed empty clusters to the farthest point from its centroid
            bool reseeded = false;
            for (std::uint32_t c = 0; c < k; ++c) {
                if (sizes[c] != 0) continue;
                double far_d = -1.0;
                std::size_t far_i = 0;
                for (std::size_t i = 0; i < count; ++i) {
                    const double d = squared_distance(
                        &points.data[i * dim], &centroids[std::size_t(labels[i]) * dim], dim);
                    if (d > far_d) {
                        far_d = d;
                        far_i = i;
                    }
                }
                for (std::size_t t = 0; t < dim; ++t)
                    centroids[std::size_t(c) * dim + t] = points.at(far_i, t);
                reseeded = true;
            }

            if (!reseeded && labels == prev_labels) break;
            prev_labels = labels;
        }

        double wcss = 0.0;
        for (std::size_t i = 0; i < count; ++i)
            wcss += squared_distance(&points.data[i * dim],
                                     &centroids[std::size_t(labels[i]) * dim], dim);
        if (wcss < best.wcss) {
            best.wcss = wcss;
            best.labels = labels;
        }
    }
    return best;
}

std::vector<std::uint32_t> threshold_cluster(const RealMatrix& points, double theta) {
    if (!(theta > 0.0)) throw ParamError("threshold_cluster: theta must be > 0");
    const std::size_t count = points.rows;
    const auto edges = kernels::threshold_edges(points.data.data(), count, points.cols, theta);

    DisjointSets sets(count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::uint32_t j : edges[i]) sets.unite(static_cast<std::uint32_t>(i), j);

    std::vector<std::uint32_t> labels(count);
    std::vector<std::uint32_t> component_id(count, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next_id = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t root = sets.find(static_cast<std::uint32_t>(i));
        if (component_id[root] == std::numeric_limits<std::uint32_t>::max())
            component_id[root] = next_id++;
        labels[i] = component_id[root];
    }
    return labels;
}

LatentAssignment estimate_latents(const Table& table, const SpectralConfig& config,
                                  SpectralReport* report) {
    table.validate();
    config.validate();
    if (config.k_r > table.m || config.k_c > table.n)
        throw ParamError("estimate_latents: latent counts exceed table dimensions");

    LatentAssignment latents;
    latents.latent_size_r = config.k_r;
    latents.latent_size_c = config.k_c;

    if (config.k_r == 1 && config.k_c == 1) {
        // nothing to estimate; Algorithm's k-1 = 0 singular vectors
        latents.rows.assign(table.m, 0);
        latents.cols.assign(table.n, 0);
        if (report) *report = SpectralReport{};
        return latents;
    }

    const std::uint32_t min_dim = std::min(table.m, table.n);
    const std::uint32_t r =
        std::min(std::max(std::max(config.k_r, config.k_c) - 1, 1u), min_dim);
    const std::uint32_t iters = config.power_iters > 0
                                    ? config.power_iters
                                    : static_cast<std::uint32_t>(
                                          std::ceil(4.0 * std::log2(double(min_dim)))) +
                                          10;

    RealMatrix m = embed(table, EmbeddingMap::default_map(table.alphabet));

    // Double-center before the SVD.  The raw embedded matrix carries a large
    // mean mode whose singular vector is uninformative for clustering; after
    // centering, the top k-1 directions are exactly the latent difference
    // modes (the Theorem-style separation constant is sigma_min of the
    // conditional-mean matrix, which lives in those modes).
    {
        std::vector<double> row_mean(table.m, 0.0), col_mean(table.n, 0.0);
        double grand = 0.0;
        for (std::uint32_t i = 0; i < table.m; ++i) {
            for (std::uint32_t j = 0; j < table.n; ++j) {
                const double v = m.at(i, j);
                row_mean[i] += v;
                col_mean[j] += v;
                grand += v;
            }
        }
        for (auto& v : row_mean) v /= table.n;
        for (auto& v : col_mean) v /= table.m;
        grand /= double(table.m) * table.n;
        for (std::uint32_t i = 0; i < table.m; ++i)
            for (std::uint32_t j = 0; j < table.n; ++j)
                m.at(i, j) += grand - row_mean[i] - col_mean[j];
    }

    // Optionally run the SVD on a uniform row sample; the right factors B
    // are then used to project every row.
    std::uint32_t sampled_rows = table.m;
    SvdResult svd;
    if (config.row_subsample < 1.0) {
        sampled_rows = std::max<std::uint32_t>(
            r, static_cast<std::uint32_t>(std::ceil(config.row_subsample * table.m)));
        sampled_rows = std::min(sampled_rows, table.m);
        std::vector<std::uint32_t> rows_pick(table.m);
        std::iota(rows_pick.begin(), rows_pick.end(), 0u);
        rng::Stream stream(rng::derive(config.seed, kSaltSubsample));
        for (std::uint32_t i = 0; i < sampled_rows; ++i) {
            const std::size_t swap_with = i + std::size_t(stream.next_below(table.m - i));
            std::swap(rows_pick[i], rows_pick[swap_with]);
        }
        RealMatrix sub{sampled_rows, table.n, std::vector<double>(std::size_t(sampled_rows) * table.n)};
        for (std::uint32_t i = 0; i < sampled_rows; ++i)
            std::copy_n(m.data.begin() + std::size_t(rows_pick[i]) * table.n, table.n,
                        sub.data.begin() + std::size_t(i) * table.n);
        svd = top_singular_vectors(sub, r, iters, config.seed);
    } else {
        svd = top_singular_vectors(m, r, iters, config.seed);
    }

    // Row features: columns of M*B normalized to unit length.  With the full
    // SVD this reproduces the orthonormal left factors exactly; with a row
    // sample it projects every row onto the learned right subspace.
    RealMatrix row_feats{table.m, r, std::vector<double>(std::size_t(table.m) * r)};
    kernels::matmul_mb(m.data.data(), table.m, table.n, svd.right.data.data(), r,
                       row_feats.data.data());
    for (std::uint32_t c = 0; c < r; ++c) {
        double norm = 0.0;
        for (std::uint32_t i = 0; i < table.m; ++i)
            norm += row_feats.at(i, c) * row_feats.at(i, c);
        norm = std::sqrt(norm);
        const double inv = norm > 0.0 ? 1.0 / norm : 0.0;
        for (std::uint32_t i = 0; i < table.m; ++i) row_feats.at(i, c) *= inv;
    }

    SpectralReport rep;
    rep.sigma = svd.sigma;
    rep.svd_residual = svd.residual;
    rep.sampled_rows = sampled_rows;

    auto cluster = [&](const RealMatrix& points, std::uint32_t k, std::uint64_t salt,
                       double& wcss_out, std::uint32_t& components_out) {
        if (k == 1) {
            components_out = 1;
            wcss_out = 0.0;
            return std::vector<std::uint32_t>(points.rows, 0u);
        }
        if (config.method == ClusterMethod::KMeans) {
            KMeansResult res = kmeans(points, k, config.restarts, rng::derive(config.seed, salt));
            wcss_out = res.wcss;
            components_out = k;
            return std::move(res.labels);
        }
        auto labels = threshold_cluster(points, config.theta);
        components_out = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        wcss_out = 0.0;
        return labels;
    };

    latents.rows = cluster(row_feats, config.k_r, kSaltRowsCluster, rep.wcss_rows,
                           rep.components_rows);
    latents.cols = cluster(svd.right, config.k_c, kSaltColsCluster, rep.wcss_cols,
                           rep.components_cols);
    latents.latent_size_r = rep.components_rows;
    latents.latent_size_c = rep.components_cols;
    if (config.method == ClusterMethod::KMeans) {
        latents.latent_size_r = config.k_r;
        latents.latent_size_c = config.k_c;
    }

    if (report) *report = std::move(rep);
    return latents;
}

double latent_error(std::span<const std::uint32_t> estimated,
                    std::span<const std::uint32_t> truth, std::uint32_t latent_size) {
    if (estimated.size() != truth.size()) throw ParamError("latent_error: length mismatch");
    if (estimated.empty()) return 0.0;
    const std::uint32_t k = latent_size;
    for (auto x : estimated)
        if (x >= k) throw ParamError("latent_error: estimated label out of range");
    for (auto x : truth)
        if (x >= k) throw ParamError("latent_error: true label out of range");

    // confusion[a][b] = #(estimated == a && truth == b)
    std::vector<std::uint64_t> confusion(std::size_t(k) * k, 0);
    for (std::size_t i = 0; i < estimated.size(); ++i)
        ++confusion[std::size_t(estimated[i]) * k + truth[i]];

    std::uint64_t best_agree = 0;
    if (k <= 8) {
        std::vector<std::uint32_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0u);
        do {
            std::uint64_t agree = 0;
            for (std::uint32_t b = 0; b < k; ++b) agree += confusion[std::size_t(perm[b]) * k + b];
            best_agree = std::max(best_agree, agree);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // Hungarian assignment (potentials form) maximizing agreement.
        const std::int64_t kBig = std::int64_t(estimated.size()) + 1;
        std::vector<std::int64_t> cost(std::size_t(k) * k);
        for (std::size_t t = 0; t < cost.size(); ++t)
            cost[t] = kBig - std::int64_t(confusion[t]);

        const std::uint32_t n = k;
        std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
        std::vector<std::uint32_t> match(n + 1, 0), way(n + 1, 0);
        for (std::uint32_t i = 1; i <= n; ++i) {
            match[0] = i;
            std::uint32_t j0 = 0;
            std::vector<std::int64_t> minv(n + 1, std::numeric_limits<std::int64_t>::max());
            std::vector<char> used(n + 1, false);
            do {
                used[j0] = true;
                const std::uint32_t i0 = match[j0];
                std::int64_t delta = std::numeric_limits<std::int64_t>::max();
                std::uint32_t j1 = 0;
                for (std::uint32_t j = 1; j <= n; ++j) {
                    if (used[j]) continue;
                    const std::int64_t cur =
                        cost[std::size_t(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta) {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for (std::uint32_t j = 0; j <= n; ++j) {
                    if (used[j]) {
                        u[match[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
            } while (match[j0] != 0);
            do {
                const std::uint32_t j1 = way[j0];
                match[j0] = match[j1];
                j0 = j1;
            } while (j0 != 0);
        }
        for (std::uint32_t j = 1; j <= n; ++j) {
            if (match[j] != 0) best_agree += confusion[std::size_t(match[j] - 1) * k + (j - 1)];
        }
    }
    return 1.0 - double(best_agree) / double(estimated.size());
}

}  // namespace latentpack

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "latentpack/codecs.hpp"

namespace latentpack {

namespace {

constexpr std::size_t kDirectScanCutoff = 96;

// --- direct quadratic matcher, used for short inputs ---------------------

std::vector<LzToken> lz_parse_direct(std::span<const Symbol> seq) {
    const std::size_t n = seq.size();
    std::vector<LzToken> tokens;
    std::size_t k = 0;
    while (k < n) {
        std::size_t best_len = 0;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t len = 0;
            while (k + len < n && seq[j + len] == seq[k + len]) ++len;
            if (len >= 1 && len >= best_len) {  // >= keeps the most recent start
                best_len = len;
                best_j = j;
            }
        }
        if (best_len == 0) {
            tokens.push_back({-std::int64_t(seq[k]), 1});
            k += 1;
        } else {
            tokens.push_back({std::int64_t(best_j) + 1, best_len});
            k += best_len;
        }
    }
    return tokens;
}

// --- suffix-array matcher -------------------------------------------------
//
// L_k is the longest common prefix between suffix k and any earlier-starting
// suffix; in suffix-array order that maximum is attained at the nearest
// already-started rank on either side.  The tie rule (largest start index
// among the maximizers) is answered by a range-max over the rank interval
// whose lcp with rank(k) stays >= L_k.

std::vector<std::int32_t> build_suffix_array(std::span<const Symbol> s) {
    const std::int32_t n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> sa(n), rank(n), next_rank(n), order(n);

    {
        std::vector<std::int32_t> cnt(257, 0);
        for (std::int32_t i = 0; i < n; ++i) ++cnt[s[i] + 1];
        for (int c = 1; c < 257; ++c) cnt[c] += cnt[c - 1];
        for (std::int32_t i = 0; i < n; ++i) sa[cnt[s[i]]++] = i;
        rank[sa[0]] = 0;
        for (std::int32_t r = 1; r < n; ++r)
            rank[sa[r]] = rank[sa[r - 1]] + (s[sa[r]] != s[sa[r - 1]] ? 1 : 0);
    }

    std::vector<std::int32_t> bucket(n + 1);
    for (std::int32_t k = 1; k < n && rank[sa[n - 1]] != n - 1; k <<= 1) {
        // order by second key: suffixes without one first, then by current sa
        std::int32_t p = 0;
        for (std::int32_t i = n - k; i < n; ++i) order[p++] = i;
        for (std::int32_t r = 0; r < n; ++r)
            if (sa[r] >= k) order[p++] = sa[r] - k;

        // stable counting sort by first key
        std::fill(bucket.begin(), bucket.end(), 0);
        for (std::int32_t i = 0; i < n; ++i) ++bucket[rank[i] + 1];
        for (std::int32_t c = 1; c <= n; ++c) bucket[c] += bucket[c - 1];
        for (std::int32_t t = 0; t < n; ++t) {
            const std::int32_t i = order[t];
            sa[bucket[rank[i]]++] = i;
        }

        next_rank[sa[0]] = 0;
        for (std::int32_t r = 1; r < n; ++r) {
            const std::int32_t a = sa[r - 1], b = sa[r];
            const std::int32_t a2 = a + k < n ? rank[a + k] : -1;
            const std::int32_t b2 = b + k < n ? rank[b + k] : -1;
            next_rank[b] = next_rank[a] + (rank[a] != rank[b] || a2 != b2 ? 1 : 0);
        }
        rank.swap(next_rank);
    }
    return sa;
}

// Kasai: lcp[r] = lcp(suffix sa[r-1], suffix sa[r]), lcp[0] = 0.
std::vector<std::int32_t> build_lcp(std::span<const Symbol> s,
                                    const std::vector<std::int32_t>& sa,
                                    const std::vector<std::int32_t>& rank) {
    const std::int32_t n = static_cast<std::int32_t>(s.size());
    std::vector<std::int32_t> lcp(n, 0);
    std::int32_t h = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::int32_t j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
        lcp[rank[i]] = h;
        if (h > 0) --h;
    }
    return lcp;
}

class SparseMin {
public:
    explicit SparseMin(const std::vector<std::int32_t>& values) {
        const std::size_t n = values.size();
        levels_ = n <= 1 ? 1 : std::bit_width(n) ;
        table_.resize(levels_);
        table_[0] = values;
        for (std::size_t l = 1; l < levels_; ++l) {
            const std::size_t half = std::size_t(1) << (l - 1);
            table_[l].resize(n - (std::size_t(1) << l) + 1);
            for (std::size_t i = 0; i < table_[l].size(); ++i)
                table_[l][i] = std::min(table_[l - 1][i], table_[l - 1][i + half]);
        }
    }

    // min over values[lo..hi], inclusive, lo <= hi
    std::int32_t query(std::size_t lo, std::size_t hi) const {
        const std::size_t len = hi - lo + 1;
        const std::size_t l = std::bit_width(len) - 1;
        return std::min(table_[l][lo], table_[l][hi + 1 - (std::size_t(1) << l)]);
    }

private:
    std::size_t levels_;
    std::vector<std::vector<std::int32_t>> table_;
};

// Ordered set over [0, n) with O(log64 n) insert / prev / next.
class BitTree {
public:
    explicit BitTree(std::size_t n) {
        std::size_t size = n;
        do {
            size = (size + 63) / 64;
            levels_.emplace_back(size, 0);
        } while (size > 1);
    }

    void insert(std::size_t pos) {
        for (auto& level : levels_) {
            const std::uint64_t mask = std::uint64_t(1) << (pos & 63);
            pos >>= 6;
            const bool had = level[pos] != 0;
            level[pos] |= mask;
            if (had) return;
        }
    }

    // largest set index < pos, or -1
    std::int64_t prev(std::size_t pos) const {
        if (pos == 0) return -1;
        std::size_t i = pos - 1;  // candidate upper bound, inclusive
        for (std::size_t level = 0; level < levels_.size();) {
            const std::size_t word_idx = i >> 6;
            const std::uint64_t word =
                levels_[level][word_idx] & (~std::uint64_t(0) >> (63 - (i & 63)));
            if (word != 0) {
                std::size_t p = (word_idx << 6) | std::size_t(63 - std::countl_zero(word));
                while (level > 0) {
                    --level;
                    p = (p << 6) | std::size_t(63 - std::countl_zero(levels_[level][p]));
                }
                return std::int64_t(p);
            }
            if (word_idx == 0) return -1;
            i = word_idx - 1;
            ++level;
        }
        return -1;
    }

    // smallest set index > pos, or -1
    std::int64_t next(std::size_t pos) const {
        std::size_t i = pos + 1;  // candidate lower bound, inclusive
        for (std::size_t level = 0; level < levels_.size();) {
            const std::size_t word_idx = i >> 6;
            if (word_idx >= levels_[level].size()) return -1;
            const std::uint64_t word = levels_[level][word_idx] & (~std::uint64_t(0) << (i & 63));
            if (word != 0) {
                std::size_t p = (word_idx << 6) | std::size_t(std::countr_zero(word));
                while (level > 0) {
                    --level;
                    p = (p << 6) | std::size_t(std::countr_zero(levels_[level][p]));
                }
                return std::int64_t(p);
            }
            i = word_idx + 1;
            ++level;
        }
        return -1;
    }

private:
    std::vector<std::vector<std::uint64_t>> levels_;
};

// Range-max segment tree keyed by suffix rank, holding activated start
// positions (-1 when inactive).
class MaxSegTree {
public:
    explicit MaxSegTree(std::size_t n) : size_(std::bit_ceil(std::max<std::size_t>(n, 1))) {
        tree_.assign(2 * size_, -1);
    }

    void activate(std::size_t pos, std::int32_t value) {
        std::size_t i = pos + size_;
        tree_[i] = value;
        for (i >>= 1; i >= 1; i >>= 1)
            tree_[i] = std::max(tree_[2 * i], tree_[2 * i + 1]);
    }

    // max over [lo, hi] inclusive, -1 if none active
    std::int32_t query(std::size_t lo, std::size_t hi) const {
        std::int32_t best = -1;
        std::size_t l = lo + size_, r = hi + size_ + 1;
        while (l < r) {
            if (l & 1) best = std::max(best, tree_[l++]);
            if (r & 1) best = std::max(best, tree_[--r]);
            l >>= 1;
            r >>= 1;
        }
        return best;
    }

private:
    std::size_t size_;
    std::vector<std::int32_t> tree_;
};

std::vector<LzToken> lz_parse_suffix_array(std::span<const Symbol> seq) {
    const std::int32_t n = static_cast<std::int32_t>(seq.size());
    const auto sa = build_suffix_array(seq);
    std::vector<std::int32_t> rank(n);
    for (std::int32_t r = 0; r < n; ++r) rank[sa[r]] = r;
    const auto lcp = build_lcp(seq, sa, rank);
    const SparseMin rmq(lcp);
    BitTree active(n);
    MaxSegTree starts(n);

    // lcp between two ranks r1 < r2 is min lcp[r1+1 .. r2]
    auto lcp_between = [&](std::int32_t r1, std::int32_t r2) {
        return rmq.query(std::size_t(r1) + 1, std::size_t(r2));
    };

    std::vector<LzToken> tokens;
    std::int32_t k = 0;
    std::int32_t activated = 0;
    while (k < n) {
        while (activated < k) {
            active.insert(std::size_t(rank[activated]));
            starts.activate(std::size_t(rank[activated]), activated);
            ++activated;
        }
        const std::int32_t rk = rank[k];
        const std::int64_t pred = active.prev(std::size_t(rk));
        const std::int64_t succ = active.next(std::size_t(rk));
        std::int32_t match = 0;
        if (pred >= 0) match = std::max(match, lcp_between(std::int32_t(pred), rk));
        if (succ >= 0) match = std::max(match, lcp_between(rk, std::int32_t(succ)));

        if (match == 0) {
            tokens.push_back({-std::int64_t(seq[std::size_t(k)]), 1});
            k += 1;
            continue;
        }

        // widest rank interval around rk whose lcp with rk stays >= match
        std::int32_t lo = rk;
        {
            std::int32_t lo_bound = 0, hi_bound = rk;
            while (lo_bound < hi_bound) {
                const std::int32_t mid = lo_bound + (hi_bound - lo_bound) / 2;
                if (lcp_between(mid, rk) >= match)
                    hi_bound = mid;
                else
                    lo_bound = mid + 1;
            }
            lo = lo_bound;
        }
        std::int32_t hi = rk;
        {
            std::int32_t lo_bound = rk, hi_bound = n - 1;
            while (lo_bound < hi_bound) {
                const std::int32_t mid = lo_bound + (hi_bound - lo_bound + 1) / 2;
                if (lcp_between(rk, mid) >= match)
                    lo_bound = mid;
                else
                    hi_bound = mid - 1;
            }
            hi = lo_bound;
        }

        const std::int32_t best_j = starts.query(std::size_t(lo), std::size_t(hi));
        tokens.push_back({std::int64_t(best_j) + 1, std::uint64_t(match)});
        k += match;
    }
    return tokens;
}

}  // namespace

namespace detail {

std::vector<LzToken> lz_parse_with_cutoff(std::span<const Symbol> seq, const Alphabet& alphabet,
                                          std::size_t cutoff) {
    alphabet.validate();
    if (seq.empty()) throw ParamError("lz_parse: empty input");
    for (Symbol s : seq) {
        if (s >= alphabet.size) throw ParamError("lz_parse: symbol outside alphabet");
    }
    if (seq.size() < cutoff) return lz_parse_direct(seq);
    return lz_parse_suffix_array(seq);
}

}  // namespace detail

std::vector<LzToken> lz_parse(std::span<const Symbol> seq, const Alphabet& alphabet) {
    return detail::lz_parse_with_cutoff(seq, alphabet, kDirectScanCutoff);
}

}  // namespace latentpack

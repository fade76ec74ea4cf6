#include "latentpack/codecs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace latentpack {

// ---------------------------------------------------------------------------
// Plain coding

BitWriter plain_encode(std::span<const Symbol> seq, const Alphabet& alphabet) {
    alphabet.validate();
    const std::uint32_t width = alphabet.plain_width();
    BitWriter out;
    for (Symbol s : seq) {
        if (s >= alphabet.size) throw ParamError("plain_encode: symbol outside alphabet");
        out.put_bits(s, width);
    }
    return out;
}

std::vector<Symbol> plain_decode(BitReader& in, const Alphabet& alphabet, std::size_t count) {
    alphabet.validate();
    const std::uint32_t width = alphabet.plain_width();
    std::vector<Symbol> seq(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t v = in.get_bits(width);
        if (v >= alphabet.size) throw CorruptStreamError("plain_decode: symbol outside alphabet");
        seq[i] = static_cast<Symbol>(v);
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Elias gamma

void length_code_encode(BitWriter& out, std::uint64_t length) {
    if (length < 1) throw ParamError("length code: length must be >= 1");
    const std::uint32_t bits = static_cast<std::uint32_t>(std::bit_width(length));
    for (std::uint32_t i = 1; i < bits; ++i) out.put_bit(false);
    out.put_bits(length, bits);
}

BitWriter length_code_encode(std::uint64_t length) {
    BitWriter out;
    length_code_encode(out, length);
    return out;
}

std::uint64_t length_code_decode(BitReader& in) {
    std::uint32_t zeros = 0;
    while (!in.get_bit()) {
        if (++zeros > 63) throw CorruptStreamError("length code: prefix too long");
    }
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < zeros; ++i) v = (v << 1) | std::uint64_t(in.get_bit());
    return v;
}

// ---------------------------------------------------------------------------
// LZ framing around lz_parse (the matcher lives in lz_matcher.cpp)

namespace {

std::uint32_t pointer_width(std::size_t n, const Alphabet& alphabet) {
    // T + |X| - 1 ranges over {0, ..., N + |X| - 1}.
    return static_cast<std::uint32_t>(std::bit_width(std::uint64_t(n) + alphabet.size - 1));
}

std::uint64_t gamma_bits(std::uint64_t length) {
    return 2 * std::uint64_t(std::bit_width(length) - 1) + 1;
}

}  // namespace

LzSizeBreakdown lz_size_breakdown(std::span<const Symbol> seq, const Alphabet& alphabet) {
    const auto tokens = lz_parse(seq, alphabet);
    const std::uint32_t pw = pointer_width(seq.size(), alphabet);
    LzSizeBreakdown b;
    for (const LzToken& t : tokens) b.token_bits += pw + gamma_bits(t.length);
    b.plain_bits = std::uint64_t(seq.size()) * alphabet.plain_width();
    b.used_plain = b.token_bits > b.plain_bits;
    return b;
}

std::vector<std::uint8_t> lz_encode(std::span<const Symbol> seq, const Alphabet& alphabet) {
    alphabet.validate();
    if (seq.empty()) throw ParamError("lz_encode: empty input");
    const auto tokens = lz_parse(seq, alphabet);
    const std::uint32_t pw = pointer_width(seq.size(), alphabet);

    std::uint64_t token_bits = 0;
    for (const LzToken& t : tokens) token_bits += pw + gamma_bits(t.length);
    const std::uint64_t plain_bits = std::uint64_t(seq.size()) * alphabet.plain_width();

    std::vector<std::uint8_t> out;
    out.push_back(token_bits <= plain_bits ? 0 : 1);
    put_varint(out, seq.size());

    BitWriter bits;
    if (token_bits <= plain_bits) {
        for (const LzToken& t : tokens) {
            bits.put_bits(std::uint64_t(t.pointer + alphabet.size - 1), pw);
            length_code_encode(bits, t.length);
        }
    } else {
        bits = plain_encode(seq, alphabet);
    }
    const auto& payload = bits.bytes();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<Symbol> lz_decode(std::span<const std::uint8_t> bytes, const Alphabet& alphabet) {
    alphabet.validate();
    if (bytes.empty()) throw TruncatedStreamError("lz_decode: empty stream");
    const std::uint8_t mode = bytes[0];
    if (mode > 1) throw CorruptStreamError("lz_decode: unknown mode byte");
    std::size_t pos = 1;
    const std::uint64_t n = get_varint(bytes, pos);
    if (n == 0) throw CorruptStreamError("lz_decode: zero-length payload");
    BitReader bits(bytes.subspan(pos));

    std::vector<Symbol> out;
    if (mode == 1) {
        out = plain_decode(bits, alphabet, n);
    } else {
        const std::uint32_t pw = pointer_width(n, alphabet);
        out.reserve(n);
        while (out.size() < n) {
            const std::int64_t pointer =
                std::int64_t(bits.get_bits(pw)) - std::int64_t(alphabet.size) + 1;
            const std::uint64_t length = length_code_decode(bits);
            if (out.size() + length > n) throw CorruptStreamError("lz_decode: output overrun");
            if (pointer <= 0) {
                if (length != 1) throw CorruptStreamError("lz_decode: literal with length != 1");
                out.push_back(static_cast<Symbol>(-pointer));
            } else {
                if (std::uint64_t(pointer) > out.size())
                    throw PointerRangeError("lz_decode: back-reference ahead of cursor");
                // forward copy; overlapping self-reference extends the output
                std::size_t src = std::size_t(pointer) - 1;
                for (std::uint64_t t = 0; t < length; ++t) out.push_back(out[src + t]);
            }
        }
    }
    if (bits.remaining() >= 8) throw CorruptStreamError("lz_decode: trailing data");
    return out;
}

// ---------------------------------------------------------------------------
// rANS

FrequencyTable FrequencyTable::from_counts(std::vector<std::uint64_t> counts) {
    FrequencyTable f;
    f.total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    f.counts = std::move(counts);
    return f;
}

FrequencyTable FrequencyTable::count(std::span<const Symbol> seq, const Alphabet& alphabet) {
    alphabet.validate();
    std::vector<std::uint64_t> counts(alphabet.size, 0);
    for (Symbol s : seq) {
        if (s >= alphabet.size) throw ParamError("frequency count: symbol outside alphabet");
        ++counts[s];
    }
    return from_counts(std::move(counts));
}

std::vector<std::uint32_t> scale_frequencies(const FrequencyTable& freq) {
    const std::size_t k = freq.counts.size();
    std::vector<std::uint32_t> scaled(k, 0);
    if (freq.total == 0) return scaled;
    if (k > kRansProbScale) throw ParamError("rans: alphabet larger than probability scale");

    // Largest-remainder rounding of counts[x] * 4096 / total, every present
    // symbol kept at >= 1.  Pure integer math so all platforms agree.
    std::vector<std::uint64_t> remainder(k, 0);
    std::uint64_t sum = 0;
    for (std::size_t x = 0; x < k; ++x) {
        if (freq.counts[x] == 0) continue;
        const unsigned __int128 prod = (unsigned __int128)freq.counts[x] * kRansProbScale;
        std::uint64_t share = static_cast<std::uint64_t>(prod / freq.total);
        remainder[x] = static_cast<std::uint64_t>(prod % freq.total);
        if (share == 0) share = 1;
        scaled[x] = static_cast<std::uint32_t>(share);
        sum += share;
    }

    if (sum < kRansProbScale) {
        std::vector<std::size_t> order;
        for (std::size_t x = 0; x < k; ++x)
            if (freq.counts[x] > 0) order.push_back(x);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return remainder[a] > remainder[b];
        });
        std::uint64_t deficit = kRansProbScale - sum;
        for (std::size_t t = 0; deficit > 0; t = (t + 1) % order.size()) {
            ++scaled[order[t]];
            --deficit;
        }
    } else if (sum > kRansProbScale) {
        std::uint64_t excess = sum - kRansProbScale;
        while (excess > 0) {
            std::size_t best = k;
            for (std::size_t x = 0; x < k; ++x) {
                if (scaled[x] > 1 && (best == k || scaled[x] > scaled[best])) best = x;
            }
            --scaled[best];
            --excess;
        }
    }
    return scaled;
}

namespace {

constexpr std::uint32_t kRansLow = 1u << 16;

struct RansLayout {
    std::vector<std::uint32_t> scaled;
    std::vector<std::uint32_t> cum;  // size k+1
    std::vector<Symbol> slot_to_symbol;

    explicit RansLayout(const FrequencyTable& freq) {
        scaled = scale_frequencies(freq);
        cum.assign(scaled.size() + 1, 0);
        for (std::size_t x = 0; x < scaled.size(); ++x) cum[x + 1] = cum[x] + scaled[x];
        slot_to_symbol.resize(kRansProbScale);
        for (std::size_t x = 0; x < scaled.size(); ++x)
            for (std::uint32_t s = cum[x]; s < cum[x + 1]; ++s)
                slot_to_symbol[s] = static_cast<Symbol>(x);
    }
};

}  // namespace

std::vector<std::uint8_t> rans_encode(std::span<const Symbol> seq, const FrequencyTable& freq) {
    if (seq.empty()) return {};
    const RansLayout layout(freq);
    for (Symbol s : seq) {
        if (s >= freq.counts.size() || freq.counts[s] == 0)
            throw ParamError("rans_encode: symbol with zero frequency");
    }

    // Encoding runs backwards; emitted 16-bit words are reversed at the end
    // so the decoder reads forward.
    std::vector<std::uint16_t> words;
    std::uint32_t state = kRansLow;
    for (std::size_t i = seq.size(); i-- > 0;) {
        const Symbol s = seq[i];
        const std::uint32_t f = layout.scaled[s];
        const std::uint64_t x_max = (std::uint64_t(kRansLow >> kRansProbBits) << 16) * f;
        while (state >= x_max) {
            words.push_back(static_cast<std::uint16_t>(state));
            state >>= 16;
        }
        state = ((state / f) << kRansProbBits) + (state % f) + layout.cum[s];
    }
    words.push_back(static_cast<std::uint16_t>(state));
    words.push_back(static_cast<std::uint16_t>(state >> 16));

    std::vector<std::uint8_t> out;
    out.reserve(words.size() * 2);
    for (std::size_t i = words.size(); i-- > 0;) {
        out.push_back(static_cast<std::uint8_t>(words[i]));
        out.push_back(static_cast<std::uint8_t>(words[i] >> 8));
    }
    return out;
}

std::vector<Symbol> rans_decode(std::span<const std::uint8_t> bytes, const FrequencyTable& freq,
                                std::size_t count) {
    if (count == 0) {
        if (!bytes.empty()) throw CorruptStreamError("rans_decode: data after empty payload");
        return {};
    }
    if (bytes.size() % 2 != 0) throw CorruptStreamError("rans_decode: odd byte count");
    if (bytes.size() < 4) throw TruncatedStreamError("rans_decode: missing state");

    const RansLayout layout(freq);
    std::size_t pos = 0;
    auto next_word = [&]() -> std::uint32_t {
        if (pos + 2 > bytes.size()) throw TruncatedStreamError("rans_decode: word underrun");
        const std::uint32_t w = std::uint32_t(bytes[pos]) | std::uint32_t(bytes[pos + 1]) << 8;
        pos += 2;
        return w;
    };

    std::uint32_t state = (next_word() << 16) | next_word();
    std::vector<Symbol> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t slot = state & (kRansProbScale - 1);
        const Symbol s = layout.slot_to_symbol[slot];
        if (freq.counts[s] == 0) throw CorruptStreamError("rans_decode: slot without mass");
        out[i] = s;
        state = layout.scaled[s] * (state >> kRansProbBits) + slot - layout.cum[s];
        while (state < kRansLow) state = (state << 16) | next_word();
    }
    if (pos != bytes.size()) throw CorruptStreamError("rans_decode: trailing data");
    if (state != kRansLow) throw CorruptStreamError("rans_decode: bad final state");
    return out;
}

std::vector<std::uint8_t> rans_encode_with_table(std::span<const Symbol> seq,
                                                 const Alphabet& alphabet) {
    const FrequencyTable freq = FrequencyTable::count(seq, alphabet);
    std::vector<std::uint8_t> out;
    for (std::uint64_t c : freq.counts) put_varint(out, c);
    const auto payload = rans_encode(seq, freq);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<Symbol> rans_decode_with_table(std::span<const std::uint8_t> bytes,
                                           const Alphabet& alphabet) {
    alphabet.validate();
    std::vector<std::uint64_t> counts(alphabet.size);
    std::size_t pos = 0;
    for (std::uint32_t x = 0; x < alphabet.size; ++x) counts[x] = get_varint(bytes, pos);
    const FrequencyTable freq = FrequencyTable::from_counts(std::move(counts));
    return rans_decode(bytes.subspan(pos), freq, freq.total);
}

// ---------------------------------------------------------------------------
// Codec dispatch

std::vector<std::uint8_t> codec_encode(CodecId id, std::span<const Symbol> seq,
                                       const Alphabet& alphabet) {
    switch (id) {
        case CodecId::LZ:
            return lz_encode(seq, alphabet);
        case CodecId::ANS:
            return rans_encode_with_table(seq, alphabet);
    }
    throw ParamError("codec_encode: unregistered codec id");
}

std::vector<Symbol> codec_decode(CodecId id, std::span<const std::uint8_t> bytes,
                                 const Alphabet& alphabet) {
    switch (id) {
        case CodecId::LZ:
            return lz_decode(bytes, alphabet);
        case CodecId::ANS:
            return rans_decode_with_table(bytes, alphabet);
    }
    throw ParamError("codec_decode: unregistered codec id");
}

}  // namespace latentpack

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latentpack/bitstream.hpp"
#include "latentpack/table.hpp"

namespace latentpack {

// ---------------------------------------------------------------------------
// Fixed-width plain coding: ceil(log2 |X|) bits per symbol, MSB first.

BitWriter plain_encode(std::span<const Symbol> seq, const Alphabet& alphabet);
std::vector<Symbol> plain_decode(BitReader& in, const Alphabet& alphabet, std::size_t count);

// ---------------------------------------------------------------------------
// Elias gamma layout for lengths: 2*floor(log2 L) + 1 bits, prefix-free.

void length_code_encode(BitWriter& out, std::uint64_t length);
BitWriter length_code_encode(std::uint64_t length);
std::uint64_t length_code_decode(BitReader& in);

// ---------------------------------------------------------------------------
// Greedy Lempel-Ziv over a finite alphabet.
//
// A token is either a literal (pointer <= 0, encoding symbol -pointer,
// length 1) or a back-reference to 1-indexed position `pointer` with the
// given match length; matches may overlap their own output.

struct LzToken {
    std::int64_t pointer = 0;
    std::uint64_t length = 1;

    bool is_literal() const { return pointer <= 0; }
    bool operator==(const LzToken&) const = default;
};

// Longest-match parse; ties between equally long matches are broken toward
// the most recent start position.
std::vector<LzToken> lz_parse(std::span<const Symbol> seq, const Alphabet& alphabet);

namespace detail {
// `cutoff` selects the matcher: inputs shorter than it use a direct scan,
// the rest the suffix-array matcher.  Exposed so tests can force each path.
std::vector<LzToken> lz_parse_with_cutoff(std::span<const Symbol> seq, const Alphabet& alphabet,
                                          std::size_t cutoff);
}  // namespace detail

// Framed stream: one mode byte (0 = LZ tokens, 1 = plain fallback), then a
// varint N, then the payload bits.  The LZ payload stores each pointer in
// ceil(log2(N+|X|)) bits as T+|X|-1 and each length as a gamma code; plain
// mode is emitted whenever the token payload would exceed plain coding.
std::vector<std::uint8_t> lz_encode(std::span<const Symbol> seq, const Alphabet& alphabet);
std::vector<Symbol> lz_decode(std::span<const std::uint8_t> bytes, const Alphabet& alphabet);

// Exact payload bit counts behind lz_encode's mode decision.
struct LzSizeBreakdown {
    std::uint64_t token_bits = 0;
    std::uint64_t plain_bits = 0;
    bool used_plain = false;
};
LzSizeBreakdown lz_size_breakdown(std::span<const Symbol> seq, const Alphabet& alphabet);

// ---------------------------------------------------------------------------
// Range ANS with a static frequency table.
//
// 32-bit state, 16-bit renormalization words.  Exact symbol counts are the
// canonical description; both sides derive the same 2^12-denominator table
// from them (largest-remainder rounding, every present symbol >= 1).

struct FrequencyTable {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static FrequencyTable from_counts(std::vector<std::uint64_t> counts);
    static FrequencyTable count(std::span<const Symbol> seq, const Alphabet& alphabet);
};

inline constexpr std::uint32_t kRansProbBits = 12;
inline constexpr std::uint32_t kRansProbScale = 1u << kRansProbBits;

// Scaled table used by both encoder and decoder; sums to kRansProbScale.
std::vector<std::uint32_t> scale_frequencies(const FrequencyTable& freq);

std::vector<std::uint8_t> rans_encode(std::span<const Symbol> seq, const FrequencyTable& freq);
std::vector<Symbol> rans_decode(std::span<const std::uint8_t> bytes, const FrequencyTable& freq,
                                std::size_t count);

// Self-describing stream: the exact counts as varints (one per alphabet
// symbol), then the rANS payload.  N is the sum of the counts.
std::vector<std::uint8_t> rans_encode_with_table(std::span<const Symbol> seq,
                                                 const Alphabet& alphabet);
std::vector<Symbol> rans_decode_with_table(std::span<const std::uint8_t> bytes,
                                           const Alphabet& alphabet);

// ---------------------------------------------------------------------------
// Codec ids used by the container and the CLI.

enum class CodecId : std::uint8_t { LZ = 0, ANS = 1 };

std::vector<std::uint8_t> codec_encode(CodecId id, std::span<const Symbol> seq,
                                       const Alphabet& alphabet);
std::vector<Symbol> codec_decode(CodecId id, std::span<const std::uint8_t> bytes,
                                 const Alphabet& alphabet);

}  // namespace latentpack

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "latentpack/codecs.hpp"
#include "latentpack/rates.hpp"
#include "latentpack/rng.hpp"

using namespace latentpack;
using test_helpers::random_symbols;
using test_helpers::reference_lz_parse;

TEST_CASE("bitstream: write-then-read round-trips") {
    BitWriter w;
    w.put_bits(0b0110, 4);
    w.put_bit(true);
    w.put_bits(0x1234567890abcdefULL, 64);
    BitReader r(w.bytes(), w.bit_size());
    CHECK(r.get_bits(4) == 0b0110);
    CHECK(r.get_bit());
    CHECK(r.get_bits(64) == 0x1234567890abcdefULL);
    CHECK(r.remaining() == 0);
    CHECK_THROWS_AS(r.get_bit(), TruncatedStreamError);
}

TEST_CASE("varint: round-trip and layout") {
    std::vector<std::uint8_t> buf;
    put_varint(buf, 0);
    put_varint(buf, 127);
    put_varint(buf, 128);
    put_varint(buf, 300);
    put_varint(buf, ~std::uint64_t(0));
    std::size_t pos = 0;
    CHECK(get_varint(buf, pos) == 0);
    CHECK(get_varint(buf, pos) == 127);
    CHECK(get_varint(buf, pos) == 128);
    CHECK(get_varint(buf, pos) == 300);
    CHECK(get_varint(buf, pos) == ~std::uint64_t(0));
    CHECK(pos == buf.size());
    CHECK(buf[0] == 0);
    CHECK(buf[1] == 127);
    CHECK(buf[2] == 0x80);  // little-endian base-128
    CHECK(buf[3] == 0x01);

    std::vector<std::uint8_t> truncated{0x80};
    pos = 0;
    CHECK_THROWS_AS(get_varint(truncated, pos), TruncatedStreamError);
}

TEST_CASE("plain coding: bit layout and errors") {
    const BitWriter bits = plain_encode(std::vector<Symbol>{0, 1, 1, 0}, Alphabet{2});
    CHECK(bits.bit_size() == 4);
    CHECK(bits.bytes()[0] == 0b01100000);

    const BitWriter two = plain_encode(std::vector<Symbol>{3}, Alphabet{4});
    CHECK(two.bit_size() == 2);
    CHECK(two.bytes()[0] == 0b11000000);

    // width 3 for |X| = 5; value 5 is invalid on both sides
    CHECK_THROWS_AS(plain_encode(std::vector<Symbol>{5}, Alphabet{5}), ParamError);
    BitWriter w;
    w.put_bits(0b101, 3);
    BitReader r(w.bytes(), w.bit_size());
    CHECK_THROWS_AS(plain_decode(r, Alphabet{5}, 1), CorruptStreamError);
}

TEST_CASE("plain coding: round-trip incl. one-symbol alphabet") {
    const auto seq = random_symbols(257, 7, 11);
    const BitWriter bits = plain_encode(seq, Alphabet{7});
    BitReader r(bits.bytes(), bits.bit_size());
    CHECK(plain_decode(r, Alphabet{7}, seq.size()) == seq);

    const std::vector<Symbol> zeros(10, 0);
    const BitWriter none = plain_encode(zeros, Alphabet{1});
    CHECK(none.bit_size() == 0);
    BitReader r1(none.bytes(), 0);
    CHECK(plain_decode(r1, Alphabet{1}, 10) == zeros);
}

TEST_CASE("length code: stated bit budget") {
    CHECK(length_code_encode(1).bit_size() == 1);
    CHECK(length_code_encode(2).bit_size() == 3);
    CHECK(length_code_encode(5).bit_size() == 5);
    for (std::uint64_t len = 1; len <= 1000000; len = len < 100 ? len + 1 : len * 7 / 5) {
        const std::uint64_t expected = 2 * std::uint64_t(std::floor(std::log2(double(len)))) + 1;
        CHECK(length_code_encode(len).bit_size() == expected);
    }
    CHECK_THROWS_AS(length_code_encode(0), ParamError);
}

TEST_CASE("length code: prefix-free decode round-trip") {
    BitWriter w;
    std::vector<std::uint64_t> values{1, 2, 3, 4, 5, 17, 100, 65535, 1000000};
    for (auto v : values) length_code_encode(w, v);
    BitReader r(w.bytes(), w.bit_size());
    for (auto v : values) CHECK(length_code_decode(r) == v);
    CHECK(r.remaining() == 0);

    // malformed: all zeros
    BitWriter zeros;
    zeros.put_bits(0, 10);
    BitReader rz(zeros.bytes(), zeros.bit_size());
    CHECK_THROWS_AS(length_code_decode(rz), CorruptStreamError);
}

TEST_CASE("lz_parse: spec traces") {
    const Alphabet binary{2};
    using Tokens = std::vector<LzToken>;

    CHECK(lz_parse(std::vector<Symbol>{0, 0, 1, 0, 0}, binary) ==
          Tokens{{0, 1}, {1, 1}, {-1, 1}, {1, 2}});
    CHECK(lz_parse(std::vector<Symbol>{0, 0, 0, 0}, binary) == Tokens{{0, 1}, {1, 3}});
    CHECK(lz_parse(std::vector<Symbol>{0}, binary) == Tokens{{0, 1}});
}

TEST_CASE("lz_parse: token expansions reproduce the input") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::uint32_t x_size = 2 + seed % 4;
        const auto seq = random_symbols(1 + seed % 300, x_size, seed);
        const auto tokens = lz_parse(seq, Alphabet{x_size});
        std::vector<Symbol> rebuilt;
        for (const LzToken& t : tokens) {
            if (t.is_literal()) {
                rebuilt.push_back(static_cast<Symbol>(-t.pointer));
            } else {
                REQUIRE(t.pointer >= 1);
                REQUIRE(std::uint64_t(t.pointer) <= rebuilt.size());
                for (std::uint64_t i = 0; i < t.length; ++i)
                    rebuilt.push_back(rebuilt[std::size_t(t.pointer) - 1 + i]);
            }
        }
        CHECK(rebuilt == seq);
    }
}

TEST_CASE("lz_parse: both matchers agree with the reference") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const std::uint32_t x_size = 2 + seed % 3;
        const auto seq = random_symbols(2 + seed % 160, x_size, seed * 31 + 7);
        const auto expected = reference_lz_parse(seq);
        CHECK(detail::lz_parse_with_cutoff(seq, Alphabet{x_size}, ~std::size_t(0)) == expected);
        CHECK(detail::lz_parse_with_cutoff(seq, Alphabet{x_size}, 0) == expected);
    }
}

TEST_CASE("lz_parse: skewed inputs stress the suffix-array path") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        // long runs with occasional flips
        std::vector<Symbol> seq;
        rng::Stream stream(seed);
        while (seq.size() < 400) {
            const Symbol s = static_cast<Symbol>(stream.next_below(2));
            const std::size_t run = 1 + std::size_t(stream.next_below(30));
            seq.insert(seq.end(), run, s);
        }
        seq.resize(400);
        const auto expected = reference_lz_parse(seq);
        CHECK(detail::lz_parse_with_cutoff(seq, Alphabet{2}, 0) == expected);
    }
}

TEST_CASE("lz_encode: five-symbol example falls back to plain") {
    const std::vector<Symbol> seq{0, 0, 1, 0, 0};
    const LzSizeBreakdown b = lz_size_breakdown(seq, Alphabet{2});
    CHECK(b.token_bits == 18);  // 4 pointers x 3 bits + gamma lengths 1+1+1+3
    CHECK(b.plain_bits == 5);
    CHECK(b.used_plain);

    const auto bytes = lz_encode(seq, Alphabet{2});
    CHECK(bytes[0] == 1);  // plain mode
    CHECK(lz_decode(bytes, Alphabet{2}) == seq);
}

TEST_CASE("lz_encode: compresses runs in LZ mode") {
    const std::vector<Symbol> seq(4096, 3);
    const auto bytes = lz_encode(seq, Alphabet{4});
    CHECK(bytes[0] == 0);
    CHECK(bytes.size() < 16);
    CHECK(lz_decode(bytes, Alphabet{4}) == seq);
}

TEST_CASE("lz_encode: fair-coin rate sanity envelope") {
    const auto seq = random_symbols(100000, 2, 424242);
    const LzSizeBreakdown b = lz_size_breakdown(seq, Alphabet{2});
    const double payload_rate =
        double(std::min(b.token_bits, b.plain_bits)) / double(seq.size());
    CHECK(payload_rate <= 1.0);
    CHECK(payload_rate >= 0.5);
    const auto bytes = lz_encode(seq, Alphabet{2});
    CHECK(lz_decode(bytes, Alphabet{2}) == seq);
}

TEST_CASE("lz round-trip over fuzzed strings") {
    std::uint64_t case_id = 0;
    for (std::uint32_t x_size : {2u, 3u, 4u, 256u}) {
        for (std::uint64_t i = 0; i < 250; ++i) {
            const std::size_t len = 1 + std::size_t(rng::at(900 + case_id, 0) % 512);
            const auto seq = random_symbols(len, x_size, case_id * 131 + 5);
            const auto bytes = lz_encode(seq, Alphabet{x_size});
            CHECK(lz_decode(bytes, Alphabet{x_size}) == seq);
            ++case_id;
        }
    }
}

TEST_CASE("lz_decode: distinct decode errors") {
    const auto seq = random_symbols(64, 3, 1);
    auto bytes = lz_encode(seq, Alphabet{3});

    // truncated stream
    auto cut = bytes;
    cut.resize(cut.size() / 2);
    CHECK_THROWS_AS(lz_decode(cut, Alphabet{3}), CorruptStreamError);

    // empty / bad mode byte
    CHECK_THROWS_AS(lz_decode(std::vector<std::uint8_t>{}, Alphabet{3}), TruncatedStreamError);
    auto bad_mode = bytes;
    bad_mode[0] = 7;
    CHECK_THROWS_AS(lz_decode(bad_mode, Alphabet{3}), CorruptStreamError);

    // pointer beyond the cursor: hand-build a stream whose first token
    // back-references position 2
    BitWriter w;
    const std::uint32_t pw = 3;  // ceil(log2(4 + 3 - 1)) bits for N=4, |X|=3
    w.put_bits(2 + 3 - 1, pw);   // T = 2
    length_code_encode(w, 1);
    std::vector<std::uint8_t> crafted{0};
    put_varint(crafted, 4);
    crafted.insert(crafted.end(), w.bytes().begin(), w.bytes().end());
    CHECK_THROWS_AS(lz_decode(crafted, Alphabet{3}), PointerRangeError);
}

TEST_CASE("rans: degenerate single-symbol payload is just the state flush") {
    const std::vector<Symbol> seq(100000, 2);
    const auto freq = FrequencyTable::count(seq, Alphabet{4});
    const auto bytes = rans_encode(seq, freq);
    CHECK(bytes.size() == 4);  // 32-bit state, no renormalization output
    CHECK(rans_decode(bytes, freq, seq.size()) == seq);
}

TEST_CASE("rans: envelope against the stated overhead bound") {
    const std::size_t n = 100000;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto dist = test_helpers::random_params(1, 1, 4, seed).q_vec(0, 0);
        std::vector<Symbol> seq(n);
        for (std::size_t i = 0; i < n; ++i)
            seq[i] = static_cast<Symbol>(rng::inverse_cdf(dist, rng::unit_real(seed + 5, i)));
        const auto freq = FrequencyTable::count(seq, Alphabet{4});
        std::vector<double> q_hat(4);
        for (int x = 0; x < 4; ++x) q_hat[x] = double(freq.counts[x]) / double(n);
        const double h = entropy(q_hat);
        const double bits = 8.0 * double(rans_encode(seq, freq).size());
        CHECK(bits <= n * h + 2.0 * 4 * std::log2(double(n)) + kAnsRedundancyConstBits);
        CHECK(bits >= n * h - 64.0);
    }
}

TEST_CASE("rans: round-trip over random (seq, freq) pairs") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::uint32_t x_size = 2 + seed % 7;
        const std::size_t len = 1 + std::size_t(rng::at(seed, 9) % 300);
        const auto seq = random_symbols(len, x_size, seed * 7 + 3);
        // frequency table: empirical counts plus arbitrary extra mass
        auto freq = FrequencyTable::count(seq, Alphabet{x_size});
        for (std::uint32_t x = 0; x < x_size; ++x)
            freq.counts[x] += rng::at(seed, 20 + x) % 5;
        freq = FrequencyTable::from_counts(freq.counts);
        const auto bytes = rans_encode(seq, freq);
        CHECK(rans_decode(bytes, freq, seq.size()) == seq);
    }
}

TEST_CASE("rans: zero-frequency symbol is rejected at encode") {
    FrequencyTable freq = FrequencyTable::from_counts({10, 0, 5});
    CHECK_THROWS_AS(rans_encode(std::vector<Symbol>{0, 1, 2}, freq), ParamError);
}

TEST_CASE("rans: corrupt payloads are detected") {
    const auto seq = random_symbols(2000, 4, 55);
    const auto freq = FrequencyTable::count(seq, Alphabet{4});
    auto bytes = rans_encode(seq, freq);

    auto cut = bytes;
    cut.resize(cut.size() - 2);
    CHECK_THROWS_AS(rans_decode(cut, freq, seq.size()), CorruptStreamError);

    auto extra = bytes;
    extra.push_back(0);
    extra.push_back(0);
    CHECK_THROWS_AS(rans_decode(extra, freq, seq.size()), CorruptStreamError);
}

TEST_CASE("rans with table: self-describing round-trip") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::uint32_t x_size = 2 + seed % 16;
        const auto seq = random_symbols(1 + seed * 13 % 2000, x_size, seed);
        const auto bytes = rans_encode_with_table(seq, Alphabet{x_size});
        CHECK(rans_decode_with_table(bytes, Alphabet{x_size}) == seq);
    }
}

TEST_CASE("scale_frequencies: exact total, present symbols kept positive") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::uint32_t x_size = 2 + seed % 64;
        std::vector<std::uint64_t> counts(x_size);
        for (std::uint32_t x = 0; x < x_size; ++x) counts[x] = rng::at(seed, x) % 1000;
        counts[seed % x_size] += 1;  // at least one present
        const auto freq = FrequencyTable::from_counts(counts);
        const auto scaled = scale_frequencies(freq);
        std::uint64_t total = 0;
        for (std::uint32_t x = 0; x < x_size; ++x) {
            total += scaled[x];
            CHECK((counts[x] > 0) == (scaled[x] > 0));
        }
        CHECK(total == kRansProbScale);
    }
}

TEST_CASE("codec dispatch matches the direct calls") {
    const auto seq = random_symbols(512, 5, 3);
    CHECK(codec_encode(CodecId::LZ, seq, Alphabet{5}) == lz_encode(seq, Alphabet{5}));
    CHECK(codec_encode(CodecId::ANS, seq, Alphabet{5}) == rans_encode_with_table(seq, Alphabet{5}));
    CHECK(codec_decode(CodecId::LZ, lz_encode(seq, Alphabet{5}), Alphabet{5}) == seq);
    CHECK(codec_decode(CodecId::ANS, rans_encode_with_table(seq, Alphabet{5}), Alphabet{5}) == seq);
}

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latentpack/errors.hpp"

namespace latentpack {

// Append-only bit sink, most-significant bit first within each byte.
// The logical length is tracked in bits; the final partial byte is padded
// with zeros only when the bytes are taken out.
class BitWriter {
public:
    void put_bit(bool bit) {
        if ((len_ & 7) == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (len_ & 7));
        ++len_;
    }

    // Writes the low `width` bits of value, most significant first.
    void put_bits(std::uint64_t value, std::uint32_t width) {
        if (width > 64) throw ParamError("bitwriter: width > 64");
        for (std::uint32_t k = width; k-- > 0;) put_bit((value >> k) & 1u);
    }

    std::uint64_t bit_size() const { return len_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take_bytes() { return std::move(bytes_); }

    void append(const BitWriter& other) {
        for (std::uint64_t i = 0; i < other.len_; ++i)
            put_bit((other.bytes_[i >> 3] >> (7 - (i & 7))) & 1u);
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t len_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_len)
        : bytes_(bytes), bit_len_(bit_len) {
        if (bit_len > std::uint64_t(bytes.size()) * 8)
            throw ParamError("bitreader: bit length exceeds buffer");
    }
    explicit BitReader(std::span<const std::uint8_t> bytes)
        : BitReader(bytes, std::uint64_t(bytes.size()) * 8) {}

    bool get_bit() {
        if (pos_ >= bit_len_) throw TruncatedStreamError("bit underrun");
        bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return bit;
    }

    std::uint64_t get_bits(std::uint32_t width) {
        if (width > 64) throw ParamError("bitreader: width > 64");
        std::uint64_t v = 0;
        for (std::uint32_t k = 0; k < width; ++k) v = (v << 1) | std::uint64_t(get_bit());
        return v;
    }

    std::uint64_t position() const { return pos_; }
    std::uint64_t remaining() const { return bit_len_ - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t bit_len_;
    std::uint64_t pos_ = 0;
};

// Little-endian base-128 varints, 7 payload bits per byte, MSB = continue.
void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v);
std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos);
std::size_t varint_size(std::uint64_t v);

}  // namespace latentpack

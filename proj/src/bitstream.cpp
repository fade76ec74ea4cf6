#include "latentpack/bitstream.hpp"

namespace latentpack {

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v) | 0x80u);
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_varint(std::span<const std::uint8_t> in, std::size_t& pos) {
    std::uint64_t v = 0;
    for (std::uint32_t shift = 0; shift < 64; shift += 7) {
        if (pos >= in.size()) throw TruncatedStreamError("varint: truncated");
        std::uint8_t b = in[pos++];
        v |= std::uint64_t(b & 0x7Fu) << shift;
        if (!(b & 0x80u)) return v;
    }
    throw CorruptStreamError("varint: too long");
}

std::size_t varint_size(std::uint64_t v) {
    std::size_t n = 1;
    while (v >= 0x80) {
        v >>= 7;
        ++n;
    }
    return n;
}

}  // namespace latentpack

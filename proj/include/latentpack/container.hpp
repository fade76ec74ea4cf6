#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latentpack/codecs.hpp"
#include "latentpack/spectral.hpp"
#include "latentpack/table.hpp"

namespace latentpack {

inline constexpr char kContainerMagic[4] = {'L', 'T', 'N', 'T'};
inline constexpr std::uint8_t kContainerVersion = 1;

struct ContainerHeader {
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::uint32_t alphabet_size = 0;
    std::uint32_t k_r = 0;
    std::uint32_t k_c = 0;
    CodecId latent_codec = CodecId::ANS;
    CodecId block_codec = CodecId::ANS;
    // z_row, z_col, then the k_r*k_c blocks in lexicographic (u,v) order.
    std::vector<std::uint64_t> segment_lengths;
};

struct CompressConfig {
    SpectralConfig spectral;
    CodecId block_codec = CodecId::ANS;
    CodecId latent_codec = CodecId::ANS;
    std::optional<LatentAssignment> given_latents;
};

// Block (u,v) holds the cells with u_i = u, v_j = v, scanned in row-major
// order of the original indices.  Empty blocks are present with length 0.
std::vector<std::vector<Symbol>> partition(const Table& table, const LatentAssignment& latents);

struct CompressStats {
    LatentAssignment latents;
    SpectralReport spectral;
    std::uint64_t header_bytes = 0;
    std::uint64_t latent_bytes = 0;
    std::uint64_t block_bytes = 0;
};

std::vector<std::uint8_t> compress(const Table& table, const CompressConfig& config,
                                   CompressStats* stats = nullptr);
Table decompress(std::span<const std::uint8_t> bytes);

ContainerHeader read_container_header(std::span<const std::uint8_t> bytes,
                                      std::size_t* payload_offset = nullptr);

// 1 - 8*len / (m*n*log2|X|); may be negative.
double drr(std::uint64_t compressed_len_bytes, std::uint32_t m, std::uint32_t n,
           const Alphabet& alphabet);

}  // namespace latentpack

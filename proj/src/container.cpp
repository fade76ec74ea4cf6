#include "latentpack/container.hpp"

#include <cstring>
#include <numeric>

#include "latentpack/bitstream.hpp"

namespace latentpack {

namespace {

CodecId codec_from_byte(std::uint8_t b) {
    if (b > 1) throw CorruptStreamError("container: unregistered codec id");
    return static_cast<CodecId>(b);
}

std::vector<Symbol> narrow_labels(std::span<const std::uint32_t> labels) {
    std::vector<Symbol> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > 255) throw ParamError("container: latent label exceeds byte range");
        out[i] = static_cast<Symbol>(labels[i]);
    }
    return out;
}

std::vector<std::uint32_t> widen_labels(std::span<const Symbol> symbols) {
    return {symbols.begin(), symbols.end()};
}

}  // namespace

std::vector<std::vector<Symbol>> partition(const Table& table, const LatentAssignment& latents) {
    table.validate();
    latents.validate();
    if (latents.rows.size() != table.m || latents.cols.size() != table.n)
        throw ParamError("partition: latent dimensions do not match table");

    const std::uint32_t k_r = latents.latent_size_r, k_c = latents.latent_size_c;
    std::vector<std::vector<Symbol>> blocks(std::size_t(k_r) * k_c);

    // size first, then fill, to avoid rehash-style growth per cell
    std::vector<std::size_t> sizes(blocks.size(), 0);
    std::vector<std::uint64_t> col_count(k_c, 0);
    for (std::uint32_t j = 0; j < table.n; ++j) ++col_count[latents.cols[j]];
    for (std::uint32_t i = 0; i < table.m; ++i)
        for (std::uint32_t v = 0; v < k_c; ++v)
            sizes[std::size_t(latents.rows[i]) * k_c + v] += col_count[v];
    for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b].reserve(sizes[b]);

    for (std::uint32_t i = 0; i < table.m; ++i) {
        const std::size_t base = std::size_t(latents.rows[i]) * k_c;
        for (std::uint32_t j = 0; j < table.n; ++j)
            blocks[base + latents.cols[j]].push_back(table.at(i, j));
    }
    return blocks;
}

std::vector<std::uint8_t> compress(const Table& table, const CompressConfig& config,
                                   CompressStats* stats) {
    table.validate();
    if (table.alphabet.size < 2) throw ParamError("compress: alphabet must have >= 2 symbols");

    LatentAssignment latents;
    SpectralReport report;
    if (config.given_latents) {
        latents = *config.given_latents;
        latents.validate();
        if (latents.rows.size() != table.m || latents.cols.size() != table.n)
            throw ParamError("compress: given latents do not match table dimensions");
    } else {
        latents = estimate_latents(table, config.spectral, &report);
    }

    const Alphabet row_alpha{latents.latent_size_r};
    const Alphabet col_alpha{latents.latent_size_c};
    const auto z_row = codec_encode(config.latent_codec, narrow_labels(latents.rows), row_alpha);
    const auto z_col = codec_encode(config.latent_codec, narrow_labels(latents.cols), col_alpha);

    const auto blocks = partition(table, latents);
    std::vector<std::vector<std::uint8_t>> encoded(blocks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < std::int64_t(blocks.size()); ++b) {
        if (!blocks[std::size_t(b)].empty())
            encoded[std::size_t(b)] =
                codec_encode(config.block_codec, blocks[std::size_t(b)], table.alphabet);
    }

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kContainerMagic, kContainerMagic + 4);
    out.push_back(kContainerVersion);
    put_varint(out, table.m);
    put_varint(out, table.n);
    put_varint(out, table.alphabet.size);
    put_varint(out, latents.latent_size_r);
    put_varint(out, latents.latent_size_c);
    out.push_back(static_cast<std::uint8_t>(config.latent_codec));
    out.push_back(static_cast<std::uint8_t>(config.block_codec));
    put_varint(out, z_row.size());
    put_varint(out, z_col.size());
    for (const auto& seg : encoded) put_varint(out, seg.size());
    const std::uint64_t header_bytes = out.size();

    out.insert(out.end(), z_row.begin(), z_row.end());
    out.insert(out.end(), z_col.begin(), z_col.end());
    for (const auto& seg : encoded) out.insert(out.end(), seg.begin(), seg.end());

    if (stats) {
        stats->latents = latents;
        stats->spectral = report;
        stats->header_bytes = header_bytes;
        stats->latent_bytes = z_row.size() + z_col.size();
        stats->block_bytes = 0;
        for (const auto& seg : encoded) stats->block_bytes += seg.size();
    }
    return out;
}

ContainerHeader read_container_header(std::span<const std::uint8_t> bytes,
                                      std::size_t* payload_offset) {
    if (bytes.size() < 5) throw TruncatedStreamError("container: shorter than magic");
    if (std::memcmp(bytes.data(), kContainerMagic, 4) != 0)
        throw FramingError("container: bad magic");
    if (bytes[4] > kContainerVersion)
        throw UnsupportedVersionError("container: version " + std::to_string(bytes[4]) +
                                      " is newer than supported version " +
                                      std::to_string(kContainerVersion));

    ContainerHeader h;
    std::size_t pos = 5;
    h.m = static_cast<std::uint32_t>(get_varint(bytes, pos));
    h.n = static_cast<std::uint32_t>(get_varint(bytes, pos));
    h.alphabet_size = static_cast<std::uint32_t>(get_varint(bytes, pos));
    h.k_r = static_cast<std::uint32_t>(get_varint(bytes, pos));
    h.k_c = static_cast<std::uint32_t>(get_varint(bytes, pos));
    if (h.m == 0 || h.n == 0) throw CorruptStreamError("container: zero dimension");
    if (h.k_r == 0 || h.k_c == 0 || h.k_r > 256 || h.k_c > 256)
        throw CorruptStreamError("container: latent count outside [1,256]");
    if (h.alphabet_size < 2 || h.alphabet_size > 256)
        throw CorruptStreamError("container: invalid alphabet size");
    if (pos + 2 > bytes.size()) throw TruncatedStreamError("container: truncated codec ids");
    h.latent_codec = codec_from_byte(bytes[pos++]);
    h.block_codec = codec_from_byte(bytes[pos++]);

    const std::size_t segments = std::size_t(h.k_r) * h.k_c + 2;
    if (segments > (1u << 24)) throw CorruptStreamError("container: absurd block count");
    h.segment_lengths.resize(segments);
    for (auto& len : h.segment_lengths) len = get_varint(bytes, pos);
    if (payload_offset) *payload_offset = pos;
    return h;
}

Table decompress(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    const ContainerHeader h = read_container_header(bytes, &pos);

    std::uint64_t total = 0;
    for (auto len : h.segment_lengths) total += len;
    if (total != bytes.size() - pos)
        throw FramingError("container: segment lengths do not match payload size");

    auto take = [&](std::uint64_t len) {
        auto seg = bytes.subspan(pos, len);
        pos += len;
        return seg;
    };

    const Alphabet row_alpha{h.k_r};
    const Alphabet col_alpha{h.k_c};
    LatentAssignment latents;
    latents.latent_size_r = h.k_r;
    latents.latent_size_c = h.k_c;
    latents.rows = widen_labels(codec_decode(h.latent_codec, take(h.segment_lengths[0]), row_alpha));
    latents.cols = widen_labels(codec_decode(h.latent_codec, take(h.segment_lengths[1]), col_alpha));
    if (latents.rows.size() != h.m) throw CorruptStreamError("container: row latents wrong length");
    if (latents.cols.size() != h.n) throw CorruptStreamError("container: col latents wrong length");
    latents.validate();

    // Block membership is recomputed from the decoded latents; the scan
    // order matches the encoder's row-major original-index order.
    std::vector<std::uint64_t> expected(std::size_t(h.k_r) * h.k_c, 0);
    {
        std::vector<std::uint64_t> col_count(h.k_c, 0);
        for (auto v : latents.cols) ++col_count[v];
        for (auto u : latents.rows)
            for (std::uint32_t v = 0; v < h.k_c; ++v)
                expected[std::size_t(u) * h.k_c + v] += col_count[v];
    }

    const Alphabet alphabet{h.alphabet_size};
    std::vector<std::span<const std::uint8_t>> block_bytes(expected.size());
    for (std::size_t b = 0; b < expected.size(); ++b)
        block_bytes[b] = take(h.segment_lengths[2 + b]);

    std::vector<std::vector<Symbol>> blocks(expected.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < std::int64_t(blocks.size()); ++b) {
        try {
            if (expected[std::size_t(b)] == 0) {
                if (!block_bytes[std::size_t(b)].empty())
                    throw CorruptStreamError("container: data for an empty block");
                continue;
            }
            blocks[std::size_t(b)] =
                codec_decode(h.block_codec, block_bytes[std::size_t(b)], alphabet);
            if (blocks[std::size_t(b)].size() != expected[std::size_t(b)])
                throw CorruptStreamError("container: block length mismatch");
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    Table table;
    table.m = h.m;
    table.n = h.n;
    table.alphabet = alphabet;
    table.cells.resize(std::size_t(h.m) * h.n);
    std::vector<std::size_t> cursor(blocks.size(), 0);
    for (std::uint32_t i = 0; i < h.m; ++i) {
        const std::size_t base = std::size_t(latents.rows[i]) * h.k_c;
        for (std::uint32_t j = 0; j < h.n; ++j) {
            const std::size_t b = base + latents.cols[j];
            table.at(i, j) = blocks[b][cursor[b]++];
        }
    }
    table.validate();
    return table;
}

double drr(std::uint64_t compressed_len_bytes, std::uint32_t m, std::uint32_t n,
           const Alphabet& alphabet) {
    alphabet.validate();
    if (m < 1 || n < 1) throw ParamError("drr: m*n must be >= 1");
    if (alphabet.size < 2) throw ParamError("drr: undefined for a one-symbol alphabet");
    const double raw_bits = double(m) * double(n) * alphabet.bits_per_symbol();
    return 1.0 - 8.0 * double(compressed_len_bytes) / raw_bits;
}

}  // namespace latentpack

#include "latentpack/table.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace latentpack {

double Alphabet::bits_per_symbol() const { return std::log2(static_cast<double>(size)); }

std::uint32_t Alphabet::plain_width() const {
    return size <= 1 ? 0u : static_cast<std::uint32_t>(std::bit_width(size - 1));
}

void Table::validate() const {
    alphabet.validate();
    if (cells.size() != cell_count()) throw ParamError("table: cell count != m*n");
    for (Symbol s : cells) {
        if (s >= alphabet.size) throw ParamError("table: cell value outside alphabet");
    }
}

void LatentAssignment::validate() const {
    if (latent_size_r < 1 || latent_size_c < 1) throw ParamError("latents: sizes must be >= 1");
    for (auto u : rows) {
        if (u >= latent_size_r) throw ParamError("latents: row label out of range");
    }
    for (auto v : cols) {
        if (v >= latent_size_c) throw ParamError("latents: col label out of range");
    }
}

namespace {

constexpr char kMagic[4] = {'L', 'T', 'B', 'L'};

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw TruncatedStreamError("table dump: truncated header");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

}  // namespace

void write_table(std::ostream& out, const Table& table) {
    table.validate();
    out.write(kMagic, 4);
    put_u32(out, table.m);
    put_u32(out, table.n);
    put_u32(out, table.alphabet.size);
    out.write(reinterpret_cast<const char*>(table.cells.data()),
              static_cast<std::streamsize>(table.cells.size()));
    if (!out) throw IoError("table dump: write failed");
}

Table read_table(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw CorruptStreamError("table dump: bad magic");
    Table t;
    t.m = get_u32(in);
    t.n = get_u32(in);
    t.alphabet.size = get_u32(in);
    t.alphabet.validate();
    t.cells.resize(std::size_t(t.m) * t.n);
    in.read(reinterpret_cast<char*>(t.cells.data()), static_cast<std::streamsize>(t.cells.size()));
    if (!in && !t.cells.empty()) throw TruncatedStreamError("table dump: truncated cells");
    t.validate();
    return t;
}

void write_table_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_table(out, table);
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_table(in);
}

void write_table_csv(std::ostream& out, const Table& table) {
    for (std::uint32_t i = 0; i < table.m; ++i) {
        for (std::uint32_t j = 0; j < table.n; ++j) {
            if (j) out << ',';
            out << static_cast<unsigned>(table.at(i, j));
        }
        out << '\n';
    }
}

}  // namespace latentpack

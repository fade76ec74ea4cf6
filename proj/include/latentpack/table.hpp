#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latentpack/errors.hpp"

namespace latentpack {

// Symbols are 0..size-1.  Tables are stored one byte per cell, which caps
// the alphabet at 256; that is also what the LTBL dump format assumes.
struct Alphabet {
    std::uint32_t size = 2;

    void validate() const {
        if (size < 1 || size > 256) throw ParamError("alphabet size must be in [1,256]");
    }
    // log2 |X|; 0 for a one-symbol alphabet.
    double bits_per_symbol() const;
    // ceil(log2 |X|), the plain-coding width.
    std::uint32_t plain_width() const;

    bool operator==(const Alphabet&) const = default;
};

using Symbol = std::uint8_t;

struct Table {
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    Alphabet alphabet;
    std::vector<Symbol> cells;  // row-major, length m*n

    Symbol at(std::uint32_t i, std::uint32_t j) const { return cells[std::size_t(i) * n + j]; }
    Symbol& at(std::uint32_t i, std::uint32_t j) { return cells[std::size_t(i) * n + j]; }
    std::size_t cell_count() const { return std::size_t(m) * n; }

    void validate() const;
    bool operator==(const Table&) const = default;
};

struct LatentAssignment {
    std::vector<std::uint32_t> rows;  // length m
    std::vector<std::uint32_t> cols;  // length n
    std::uint32_t latent_size_r = 1;
    std::uint32_t latent_size_c = 1;

    void validate() const;
    bool operator==(const LatentAssignment&) const = default;
};

// Binary dump: magic "LTBL", then little-endian u32 m, n, alphabet size,
// then one byte per cell row-major.
void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);
void write_table_file(const std::string& path, const Table& table);
Table read_table_file(const std::string& path);

// Plain CSV of integers, no header.
void write_table_csv(std::ostream& out, const Table& table);

}  // namespace latentpack

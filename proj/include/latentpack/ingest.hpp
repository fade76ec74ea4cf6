#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latentpack/table.hpp"

namespace latentpack {

// Per input column: how it was turned into symbols, or why it was dropped.
struct ColumnReport {
    enum class Kind { Relabel, Quartile, Dropped };

    std::string name;
    Kind kind = Kind::Dropped;
    std::uint32_t symbol_count = 0;                 // kept columns only
    std::vector<std::string> dictionary;            // Relabel: value of symbol s
    std::vector<double> cut_points;                 // Quartile: lower/median/upper
    bool has_missing = false;                       // Quartile: empty cells seen
};

struct IngestOptions {
    bool shuffle = false;
    std::uint64_t seed = 0;
};

struct IngestResult {
    Table table;
    std::vector<ColumnReport> columns;
};

// Preprocessing rules, applied per column:
//   - at most 256 distinct values: dictionary-encode in first-occurrence order;
//   - numeric with more than 256 distinct values: 4 quartile bins (type-7
//     cut points, ties to the lower bin); empty cells become a 5th symbol;
//   - anything else is dropped.
// The table alphabet is the largest kept-column symbol count.  With
// options.shuffle the encoded rows are Fisher-Yates permuted.
IngestResult preprocess(const std::vector<std::vector<std::string>>& rows,
                        const IngestOptions& options = {});

// RFC-4180-style CSV with a header row: quoted fields, doubled quotes,
// CR/LF line ends, commas and newlines allowed inside quotes.
std::vector<std::vector<std::string>> read_csv(std::istream& in);
std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

// JSON sidecar describing the column transformations.
std::string column_report_json(const std::vector<ColumnReport>& columns);

}  // namespace latentpack

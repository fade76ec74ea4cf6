#include "latentpack/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>

#include "latentpack/rng.hpp"

namespace latentpack {

namespace {

constexpr std::size_t kMaxDictionary = 256;
constexpr std::uint64_t kSaltShuffle = 0x73686600;  // "shf"

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
    if (begin == end) return false;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

// Type-7 (linear interpolation) quantile of sorted values.
double quantile_type7(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    const double h = p * double(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - double(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

IngestResult preprocess(const std::vector<std::vector<std::string>>& rows,
                        const IngestOptions& options) {
    if (rows.size() < 2) throw IngestError("preprocess: need a header row and at least one data row");
    const std::size_t width = rows[0].size();
    if (width == 0) throw IngestError("preprocess: empty header");
    for (const auto& row : rows) {
        if (row.size() != width) throw IngestError("preprocess: ragged rows");
    }
    const std::size_t data_rows = rows.size() - 1;

    IngestResult result;
    result.columns.resize(width);
    std::vector<std::vector<Symbol>> encoded;  // per kept column
    std::vector<std::uint32_t> symbol_counts;

    for (std::size_t c = 0; c < width; ++c) {
        ColumnReport& report = result.columns[c];
        report.name = rows[0][c];

        // distinct values in first-occurrence order
        std::map<std::string, std::uint32_t> dict;
        std::vector<std::string> order;
        bool small_enough = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const std::string& cell = rows[i][c];
            if (dict.find(cell) == dict.end()) {
                if (order.size() == kMaxDictionary) {
                    small_enough = false;
                    break;
                }
                dict.emplace(cell, static_cast<std::uint32_t>(order.size()));
                order.push_back(cell);
            }
        }

        if (small_enough) {
            report.kind = ColumnReport::Kind::Relabel;
            report.dictionary = order;
            report.symbol_count = static_cast<std::uint32_t>(order.size());
            std::vector<Symbol> col(data_rows);
            for (std::size_t i = 1; i < rows.size(); ++i)
                col[i - 1] = static_cast<Symbol>(dict[rows[i][c]]);
            encoded.push_back(std::move(col));
            symbol_counts.push_back(report.symbol_count);
            continue;
        }

        // numeric? every non-empty cell must parse
        std::vector<double> values;
        values.reserve(data_rows);
        bool numeric = true;
        bool has_missing = false;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const std::string& cell = rows[i][c];
            if (cell.empty()) {
                has_missing = true;
                continue;
            }
            double v;
            if (!parse_number(cell, v)) {
                numeric = false;
                break;
            }
            values.push_back(v);
        }

        if (!numeric || values.empty()) {
            report.kind = ColumnReport::Kind::Dropped;
            continue;
        }

        std::sort(values.begin(), values.end());
        report.kind = ColumnReport::Kind::Quartile;
        report.has_missing = has_missing;
        report.cut_points = {quantile_type7(values, 0.25), quantile_type7(values, 0.50),
                             quantile_type7(values, 0.75)};
        report.symbol_count = has_missing ? 5 : 4;

        std::vector<Symbol> col(data_rows);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const std::string& cell = rows[i][c];
            if (cell.empty()) {
                col[i - 1] = 4;  // reserved missing symbol
                continue;
            }
            double v;
            parse_number(cell, v);
            Symbol bin = 3;
            if (v <= report.cut_points[0])
                bin = 0;
            else if (v <= report.cut_points[1])
                bin = 1;
            else if (v <= report.cut_points[2])
                bin = 2;
            col[i - 1] = bin;
        }
        encoded.push_back(std::move(col));
        symbol_counts.push_back(report.symbol_count);
    }

    if (encoded.empty()) throw IngestError("preprocess: every column was dropped");

    Table& table = result.table;
    table.m = static_cast<std::uint32_t>(data_rows);
    table.n = static_cast<std::uint32_t>(encoded.size());
    table.alphabet.size = std::max(*std::max_element(symbol_counts.begin(), symbol_counts.end()),
                                   std::uint32_t{1});
    table.cells.resize(std::size_t(table.m) * table.n);
    for (std::uint32_t j = 0; j < table.n; ++j)
        for (std::uint32_t i = 0; i < table.m; ++i) table.at(i, j) = encoded[j][i];

    if (options.shuffle) {
        rng::Stream stream(rng::derive(options.seed, kSaltShuffle));
        for (std::uint32_t i = table.m; i > 1; --i) {
            const std::uint32_t j = static_cast<std::uint32_t>(stream.next_below(i));
            if (j == i - 1) continue;
            for (std::uint32_t col = 0; col < table.n; ++col)
                std::swap(table.at(i - 1, col), table.at(j, col));
        }
    }

    table.validate();
    return result;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool any = false;

    auto end_field = [&]() {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    char c;
    while (in.get(c)) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (in.peek() == '\n') in.get(c);
                end_row();
                break;
            case '\n':
                end_row();
                break;
            default:
                field.push_back(c);
        }
    }
    if (in_quotes) throw IngestError("csv: unterminated quoted field");
    if (!field.empty() || !row.empty()) end_row();
    if (!any) throw IngestError("csv: empty input");
    return rows;
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_csv(in);
}

std::string column_report_json(const std::vector<ColumnReport>& columns) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& col : columns) {
        nlohmann::json entry;
        entry["name"] = col.name;
        switch (col.kind) {
            case ColumnReport::Kind::Relabel:
                entry["kind"] = "relabel";
                entry["symbols"] = col.symbol_count;
                entry["dictionary"] = col.dictionary;
                break;
            case ColumnReport::Kind::Quartile:
                entry["kind"] = "quartile";
                entry["symbols"] = col.symbol_count;
                entry["cut_points"] = col.cut_points;
                entry["has_missing"] = col.has_missing;
                break;
            case ColumnReport::Kind::Dropped:
                entry["kind"] = "dropped";
                break;
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2);
}

}  // namespace latentpack

#pragma once

// Delimited-text loader for expression tables.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"

namespace bomgene {

enum class Orientation { SamplesAsRows, FeaturesAsRows };
enum class MissingPolicy { Error, MeanImpute };

struct IngestOptions {
    char delimiter = ',';
    /// Column name or zero-based index. Unset means the last column.
    std::optional<std::variant<std::string, std::size_t>> label_column;
    Orientation orientation = Orientation::SamplesAsRows;
    MissingPolicy missing_policy = MissingPolicy::Error;
    bool header = true;
    /// Drop the first column as sample identifiers.
    bool row_names = false;
    /// Lines starting with this character are skipped. '\0' disables.
    char comment = '#';
};

struct IngestSummary {
    std::string path;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t imputed = 0;
    double parse_seconds = 0.0;
};

/// Replaces every gap with the mean of the present entries.
inline std::vector<double> impute_mean(const std::vector<std::optional<double>>& column) {
    double sum = 0.0;
    std::size_t present = 0;
    for (const auto& v : column) {
        if (v) {
            sum += *v;
            ++present;
        }
    }
    if (present == 0) {
        throw validation_error("cannot impute an all-missing column");
    }
    const double mean = sum / static_cast<double>(present);
    std::vector<double> out;
    out.reserve(column.size());
    for (const auto& v : column) {
        out.push_back(v ? *v : mean);
    }
    return out;
}

namespace detail {

struct Cell {
    std::string text;
    std::size_t line = 0;   // 1-based file line
    std::size_t column = 0; // 1-based field position in that line
};

using Grid = std::vector<std::vector<Cell>>;

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string> split_fields(const std::string& line, char delimiter, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.emplace_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (quoted) {
        throw parse_error("unterminated quote on line " + std::to_string(line_no));
    }
    fields.emplace_back(trim(current));
    return fields;
}

inline Grid read_grid(std::istream& in, const IngestOptions& options) {
    Grid grid;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        if (options.comment != '\0' && line.front() == options.comment) {
            continue;
        }
        auto fields = split_fields(line, options.delimiter, line_no);
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            row.push_back(Cell{std::move(fields[c]), line_no, c + 1});
        }
        if (!grid.empty() && row.size() != grid.front().size()) {
            throw parse_error("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(grid.front().size()) + " fields, found " + std::to_string(row.size()));
        }
        grid.push_back(std::move(row));
    }
    return grid;
}

inline Grid transpose(const Grid& grid) {
    if (grid.empty()) {
        return {};
    }
    Grid out(grid.front().size(), std::vector<Cell>(grid.size()));
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            out[c][r] = grid[r][c];
        }
    }
    return out;
}

inline bool is_missing(std::string_view text) {
    return text.empty() || text == "NA" || text == "na" || text == "?";
}

inline std::optional<double> parse_number(std::string_view text) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        return std::nullopt;
    }
    return value;
}

inline std::string where(const Cell& cell) {
    return "line " + std::to_string(cell.line) + ", column " + std::to_string(cell.column);
}

} // namespace detail

/// Parses a table from a stream. `source` names the input in diagnostics.
inline std::tuple<Dataset, Labels, IngestSummary> load_table(std::istream& in, const IngestOptions& options,
                                                             const std::string& source = "<stream>") {
    const auto started = std::chrono::steady_clock::now();
    detail::Grid grid = detail::read_grid(in, options);
    if (options.orientation == Orientation::FeaturesAsRows) {
        grid = detail::transpose(grid);
    }
    if (grid.empty()) {
        throw parse_error(source + ": no data rows");
    }

    const std::size_t width = grid.front().size();
    std::vector<std::string> header;
    std::size_t first_data_row = 0;
    if (options.header) {
        for (const auto& cell : grid.front()) {
            header.push_back(cell.text);
        }
        first_data_row = 1;
    } else {
        for (std::size_t c = 0; c < width; ++c) {
            header.push_back("f" + std::to_string(c));
        }
    }

    std::size_t label_col = width - 1;
    if (options.label_column) {
        if (const auto* index = std::get_if<std::size_t>(&*options.label_column)) {
            label_col = *index;
            if (label_col >= width) {
                throw validation_error("missing label column: index " + std::to_string(label_col) +
                                       " but table has " + std::to_string(width) + " columns");
            }
        } else {
            const auto& name = std::get<std::string>(*options.label_column);
            auto it = std::find(header.begin(), header.end(), name);
            if (!options.header || it == header.end()) {
                throw validation_error("missing label column '" + name + "'");
            }
            label_col = static_cast<std::size_t>(it - header.begin());
        }
    }
    const std::size_t skip_col = options.row_names ? 0 : width;
    if (options.row_names && label_col == 0) {
        throw validation_error("label column cannot also be the row-name column");
    }

    std::vector<std::size_t> feature_cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c) {
        if (c != label_col && c != skip_col) {
            feature_cols.push_back(c);
            names.push_back(header[c]);
        }
    }

    const std::size_t m = grid.size() - first_data_row;
    std::vector<std::string> raw_labels;
    raw_labels.reserve(m);
    std::vector<std::vector<std::optional<double>>> columns(feature_cols.size(),
                                                           std::vector<std::optional<double>>(m));
    std::size_t imputed = 0;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = grid[first_data_row + r];
        raw_labels.push_back(row[label_col].text);
        for (std::size_t f = 0; f < feature_cols.size(); ++f) {
            const auto& cell = row[feature_cols[f]];
            if (detail::is_missing(cell.text)) {
                if (options.missing_policy == MissingPolicy::Error) {
                    throw validation_error(source + ": missing value at " + detail::where(cell) + " (feature '" +
                                           names[f] + "')");
                }
                ++imputed;
                continue;
            }
            auto value = detail::parse_number(cell.text);
            if (!value) {
                throw parse_error(source + ": non-numeric feature cell '" + cell.text + "' at " + detail::where(cell));
            }
            columns[f][r] = *value;
        }
    }

    std::vector<std::vector<double>> rows(m, std::vector<double>(feature_cols.size()));
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
        std::vector<double> filled;
        try {
            filled = impute_mean(columns[f]);
        } catch (const Error&) {
            throw validation_error(source + ": feature '" + names[f] + "' has no observed values");
        }
        for (std::size_t r = 0; r < m; ++r) {
            rows[r][f] = filled[r];
        }
    }

    auto [dataset, labels] = validate_dataset(rows, std::move(names), raw_labels);
    IngestSummary summary;
    summary.path = source;
    summary.m = dataset.m();
    summary.n = dataset.n();
    summary.k = labels.k();
    summary.imputed = imputed;
    summary.parse_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {std::move(dataset), std::move(labels), summary};
}

inline std::tuple<Dataset, Labels, IngestSummary> load_table(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Runtime, "cannot open '" + path + "'");
    }
    return load_table(in, options, path);
}

} // namespace bomgene

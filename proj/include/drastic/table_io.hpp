// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace drastic::table_io {

// Comma-separated columnar text shared by every file format in the project.
// Fields are quoted only when they contain a comma, quote or newline.
using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
    // 1-based line number of each row in the source text (header is line 1).
    std::vector<std::size_t> lines;
};

// Throws ParseError (module `module`) on unbalanced quotes, an empty input
// without header, or a row whose width differs from the header.
Table parse(std::string_view text, std::string_view module, bool allow_extra_columns = false);
Table read_file(const std::filesystem::path& path, std::string_view module,
                bool allow_extra_columns = false);

std::string format_row(const Row& row);
std::string format(const Table& table);
void write_file(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path, std::string_view module);

// Shortest text that parses back to exactly the same double.
std::string format_number(double value);

double parse_double(std::string_view field, std::string_view module, std::size_t row,
                    std::string_view column);
long long parse_int(std::string_view field, std::string_view module, std::size_t row,
                    std::string_view column);

// Natural ordering for identifiers such as "S2" < "S10", "P0031" < "P00131".
// Digit runs compare by numeric value, then by length (leading zeros).
bool natural_less(std::string_view a, std::string_view b);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

} // namespace drastic::table_io

// SPDX-License-Identifier: Apache-2.0
#include "drastic/table_io.hpp"

#include "drastic/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace drastic::table_io {

namespace {

bool needs_quotes(std::string_view field) {
    return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

Table parse(std::string_view text, std::string_view module, bool allow_extra_columns) {
    Table table;
    std::vector<Row> records;
    std::vector<std::size_t> record_lines;

    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // a physically blank line is skipped
        if (!(current.size() == 1 && current.front().empty())) {
            records.push_back(std::move(current));
            record_lines.push_back(record_line);
        }
        current.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started || !field.empty())
                throw ParseError(std::string(module), "stray quote inside unquoted field", line);
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            ++line;
            record_line = line;
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw ParseError(std::string(module), "unterminated quoted field", line);
    if (field_started || !field.empty() || !current.empty()) end_record();

    if (records.empty()) throw ParseError(std::string(module), "missing header row", 1);

    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& row = records[r];
        if (row.size() != table.header.size()) {
            if (!(allow_extra_columns && row.size() > table.header.size()))
                throw ParseError(std::string(module),
                                 "expected " + std::to_string(table.header.size()) +
                                     " columns, found " + std::to_string(row.size()),
                                 record_lines[r]);
        }
        table.rows.push_back(std::move(row));
        table.lines.push_back(record_lines[r]);
    }
    return table;
}

std::string read_text(const std::filesystem::path& path, std::string_view module) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string(module), "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Table read_file(const std::filesystem::path& path, std::string_view module,
                bool allow_extra_columns) {
    return parse(read_text(path, module), module, allow_extra_columns);
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        const auto& f = row[i];
        if (needs_quotes(f)) {
            out.push_back('"');
            for (char c : f) {
                if (c == '"') out.push_back('"');
                out.push_back(c);
            }
            out.push_back('"');
        } else {
            out += f;
        }
    }
    return out;
}

std::string format(const Table& table) {
    std::string out = format_row(table.header);
    out.push_back('\n');
    for (const auto& row : table.rows) {
        out += format_row(row);
        out.push_back('\n');
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("table_io", "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("table_io", "write failed for " + path.string());
}

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    // whole numbers stay in fixed notation: 1000000, not 1e+06
    const bool whole = std::abs(value) < 1e15 && value == std::trunc(value);
    auto [ptr, ec] = whole ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed)
                           : std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("table_io", "number formatting failed");
    std::string s(buf, ptr);
    if (s == "-0") s = "0";
    return s;
}

double parse_double(std::string_view field, std::string_view module, std::size_t row,
                    std::string_view column) {
    auto t = trim(field);
    auto lower = to_lower(t);
    if (lower == "inf" || lower == "+inf" || lower == "infinity")
        return std::numeric_limits<double>::infinity();
    if (lower == "-inf" || lower == "-infinity") return -std::numeric_limits<double>::infinity();
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || std::isnan(v))
        throw ParseError(std::string(module),
                         "column " + std::string(column) + ": not a number: '" +
                             std::string(field) + "'",
                         row);
    return v;
}

long long parse_int(std::string_view field, std::string_view module, std::size_t row,
                    std::string_view column) {
    auto t = trim(field);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw ParseError(std::string(module),
                         "column " + std::string(column) + ": not an integer: '" +
                             std::string(field) + "'",
                         row);
    return v;
}

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (is_digit(a[i]) && is_digit(b[j])) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && is_digit(a[ie])) ++ie;
            while (je < b.size() && is_digit(b[je])) ++je;
            std::size_t ia = i, jb = j;
            while (ia + 1 < ie && a[ia] == '0') ++ia;
            while (jb + 1 < je && b[jb] == '0') ++jb;
            auto na = a.substr(ia, ie - ia);
            auto nb = b.substr(jb, je - jb);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            if ((ie - i) != (je - j)) return (ie - i) < (je - j);
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace drastic::table_io

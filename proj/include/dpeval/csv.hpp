#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpeval::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// Lines starting with '#' that precede the header, without the '#'.
    std::vector<std::string> comments;

    /// Index of a header column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF. Leading '#' lines
/// before the header are collected as comments. Throws DataError on ragged
/// rows or unterminated quotes.
Table read(std::istream& in);
Table read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest representation that round-trips to the same double.
std::string format_number(double value);

/// Strict full-string parses; surrounding whitespace is allowed.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

}  // namespace dpeval::csv

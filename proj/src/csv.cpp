#include "dpeval/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "dpeval/errors.hpp"

namespace dpeval::csv {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

// Reads one logical record. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
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
                if (c == '\n') ++line_no;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            ++line_no;
            break;
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field near line " + std::to_string(line_no));
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && trim(fields[0]).empty();
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

Table read(std::istream& in) {
    Table table;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    bool have_header = false;
    while (true) {
        const std::size_t record_line = line_no;
        if (!read_record(in, fields, line_no)) break;
        if (blank(fields)) continue;
        if (!have_header) {
            if (!fields[0].empty() && fields[0][0] == '#') {
                std::string comment = fields[0].substr(1);
                for (std::size_t i = 1; i < fields.size(); ++i) comment += "," + fields[i];
                table.comments.push_back(std::string(trim(comment)));
                continue;
            }
            for (auto& f : fields) f = std::string(trim(f));
            if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
            table.header = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw DataError("row " + std::to_string(table.rows.size() + 1) + " (line " +
                            std::to_string(record_line) + ") has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(fields);
    }
    if (!have_header) throw DataError("missing header row");
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    try {
        return read(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // also folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<long long> parse_integer(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) return value;
    // Accept integral floats such as "12.0" that spreadsheet exports produce.
    auto real = parse_double(text);
    if (real && std::isfinite(*real) && std::floor(*real) == *real && std::fabs(*real) < 9e15)
        return static_cast<long long>(*real);
    return std::nullopt;
}

}  // namespace dpeval::csv

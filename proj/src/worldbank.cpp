#include "datl/worldbank.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string_view>
#include <vector>

#include "datl/errors.hpp"

namespace datl {
namespace {

// Splits one CSV record. Double-quote quoting, "" escapes a quote inside a
// quoted field.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

bool is_blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

std::optional<int> parse_year(const std::string& s) {
    if (s.empty() || s.size() > 5) return std::nullopt;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return std::stoi(s);
}

} // namespace

RawIndicatorTable parse_worldbank_csv(const std::string& text, const std::string& indicator_code,
                                      YearWindow year_window) {
    std::string_view body = text;
    if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3); // UTF-8 BOM
    std::istringstream in{std::string(body)};
    std::string line;
    int line_no = 0;

    // Find the header row; everything before it is preamble.
    std::vector<std::string> header;
    int col_name = -1, col_code = -1, col_ind_name = -1, col_ind_code = -1;
    bool found_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_csv_line(line);
        col_name = col_code = col_ind_name = col_ind_code = -1;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i] == "Country Name") col_name = static_cast<int>(i);
            else if (fields[i] == "Country Code") col_code = static_cast<int>(i);
            else if (fields[i] == "Indicator Name") col_ind_name = static_cast<int>(i);
            else if (fields[i] == "Indicator Code") col_ind_code = static_cast<int>(i);
        }
        if (col_name >= 0 && col_code >= 0 && col_ind_name >= 0 && col_ind_code >= 0) {
            header = std::move(fields);
            found_header = true;
            break;
        }
    }
    if (!found_header) {
        std::string head = text.substr(0, 80);
        for (char& c : head)
            if (c == '\n' || c == '\r') c = ' ';
        throw FormatError("no World Bank header row (Country Name/Country Code/Indicator "
                          "Name/Indicator Code) found; file begins: \"" +
                          head + "\"");
    }

    // Year columns inside the configured window; other columns are ignored.
    std::vector<std::pair<int, int>> year_cols; // (column index, year)
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto y = parse_year(header[i]);
        if (y && *y >= year_window.first && *y <= year_window.second)
            year_cols.emplace_back(static_cast<int>(i), *y);
    }

    RawIndicatorTable table;
    table.indicator_code = indicator_code;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        auto fields = split_csv_line(line);
        auto field = [&](int idx) -> std::string {
            return idx >= 0 && idx < static_cast<int>(fields.size()) ? fields[idx] : std::string();
        };
        if (field(col_ind_code) != indicator_code) continue;
        std::string country = field(col_code);
        if (country.empty()) continue;

        // Inserting the country first keeps all-missing rows visible in the
        // table rather than turning them into unknown countries.
        auto& dest = table.rows[country];
        for (auto [col, year] : year_cols) {
            std::string cell = field(col);
            if (cell.empty() || cell == ".." || is_blank(cell)) continue;
            const char* begin = cell.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            bool consumed = end != begin;
            while (consumed && *end != '\0') {
                if (!std::isspace(static_cast<unsigned char>(*end))) {
                    consumed = false;
                    break;
                }
                ++end;
            }
            if (!consumed || !std::isfinite(v))
                throw ParseError("non-numeric cell \"" + cell + "\" at line " +
                                 std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                                 " (year " + std::to_string(year) + ")");
            dest[year] = v;
        }
    }
    return table;
}

} // namespace datl

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace datl {

using YearWindow = std::pair<int, int>; // inclusive [first, last]

// One indicator, wide-format: country -> year -> value. Absent map entries
// are missing observations; present values are always finite.
struct RawIndicatorTable {
    std::string indicator_code;
    std::map<std::string, std::map<int, double>> rows;

    std::optional<double> value(const std::string& country_code, int year) const {
        auto it = rows.find(country_code);
        if (it == rows.end()) return std::nullopt;
        auto jt = it->second.find(year);
        if (jt == it->second.end()) return std::nullopt;
        return jt->second;
    }
};

// Parses a World Bank wide-format indicator CSV: optional metadata preamble,
// then a header row with "Country Name","Country Code","Indicator Name",
// "Indicator Code" followed by one column per year. Rows whose indicator code
// differs from `indicator_code` are skipped. Empty cells, "..", and
// whitespace-only cells become missing; any other non-numeric cell is a
// ParseError with row/column coordinates.
RawIndicatorTable parse_worldbank_csv(const std::string& text, const std::string& indicator_code,
                                      YearWindow year_window);

} // namespace datl

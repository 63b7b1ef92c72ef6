#include "datl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "datl/errors.hpp"

namespace datl {

std::string channel_name(Channel c) {
    switch (c) {
    case Channel::GasPct: return "gas_pct";
    case Channel::LiquidPct: return "liquid_pct";
    case Channel::SolidPct: return "solid_pct";
    case Channel::Co2PerCapita: return "co2_per_capita";
    case Channel::GdpPerCapita: return "gdp_per_capita";
    }
    return "?";
}

bool CountrySeries::complete_at(std::size_t i) const {
    for (const auto& ch : channels)
        if (!ch[i].has_value()) return false;
    return true;
}

bool CountrySeries::inputs_complete_at(std::size_t i) const {
    for (std::size_t c = 0; c < kFeatureCount; ++c)
        if (!channels[c][i].has_value()) return false;
    return true;
}

std::vector<std::pair<int, int>> missing_gdp_windows(const CountrySeries& series) {
    std::vector<std::pair<int, int>> windows;
    const auto& gdp = series.channel(Channel::GdpPerCapita);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (gdp[i].has_value()) continue;
        int year = series.years[i];
        if (!windows.empty() && windows.back().second == year - 1)
            windows.back().second = year;
        else
            windows.emplace_back(year, year);
    }
    return windows;
}

CountrySeries build_country_series(const std::array<RawIndicatorTable, 5>& tables,
                                   const std::string& country_code) {
    bool known = false;
    std::set<int> year_set;
    for (const auto& table : tables) {
        auto it = table.rows.find(country_code);
        if (it == table.rows.end()) continue;
        known = true;
        for (const auto& [year, _] : it->second) year_set.insert(year);
    }
    if (!known)
        throw UnknownCountryError("country code '" + country_code +
                                  "' not present in any indicator table");

    CountrySeries series;
    series.country_code = country_code;
    series.years.assign(year_set.begin(), year_set.end());
    for (auto& ch : series.channels) ch.resize(series.years.size());

    for (std::size_t c = 0; c < tables.size(); ++c) {
        for (std::size_t i = 0; i < series.years.size(); ++i) {
            auto v = tables[c].value(country_code, series.years[i]);
            if (!v) continue;
            Channel chan = static_cast<Channel>(c);
            bool pct = c < 3;
            if (pct && (*v < 0.0 || *v > 110.0))
                throw ValidationError(channel_name(chan) + " for " + country_code + " in " +
                                      std::to_string(series.years[i]) + " is " +
                                      std::to_string(*v) + ", outside [0, 110]");
            if (!pct && *v < 0.0)
                throw ValidationError(channel_name(chan) + " for " + country_code + " in " +
                                      std::to_string(series.years[i]) + " is negative");
            series.channels[c][i] = *v;
        }
    }
    return series;
}

Dataset to_training_dataset(const CountrySeries& series) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (series.complete_at(i)) keep.push_back(i);
    if (keep.empty())
        throw EmptyDatasetError("no year with all five channels present for " +
                                series.country_code);

    Dataset d;
    d.years.reserve(keep.size());
    d.features = Matrix(keep.size(), kFeatureCount);
    d.labels.reserve(keep.size());
    d.origin_tags.assign(keep.size(), series.country_code);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        std::size_t i = keep[r];
        d.years.push_back(series.years[i]);
        for (std::size_t c = 0; c < kFeatureCount; ++c) d.features(r, c) = *series.channels[c][i];
        d.labels.push_back(*series.channel(Channel::GdpPerCapita)[i]);
    }
    return d;
}

Dataset to_prediction_dataset(const CountrySeries& series, const std::vector<int>& years) {
    std::vector<int> sorted_years = years;
    std::sort(sorted_years.begin(), sorted_years.end());

    Dataset d;
    d.features = Matrix(sorted_years.size(), kFeatureCount);
    d.labels.assign(sorted_years.size(), 0.0); // sentinel, never read
    d.origin_tags.assign(sorted_years.size(), series.country_code);
    for (std::size_t r = 0; r < sorted_years.size(); ++r) {
        int year = sorted_years[r];
        auto it = std::lower_bound(series.years.begin(), series.years.end(), year);
        if (it == series.years.end() || *it != year)
            throw IncompleteFeaturesError("year " + std::to_string(year) + " not in series for " +
                                          series.country_code);
        std::size_t i = static_cast<std::size_t>(it - series.years.begin());
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            if (!series.channels[c][i].has_value())
                throw IncompleteFeaturesError(series.country_code + " " + std::to_string(year) +
                                              ": input channel " +
                                              channel_name(static_cast<Channel>(c)) +
                                              " is missing");
            d.features(r, c) = *series.channels[c][i];
        }
        d.years.push_back(year);
    }
    return d;
}

Standardizer Standardizer::fit(const Dataset& train) {
    if (train.size() == 0) throw EmptyDatasetError("cannot fit standardizer on empty dataset");
    Standardizer s;
    const std::size_t n = train.size();
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += train.features(i, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = train.features(i, c) - mean;
            var += d * d;
        }
        double stdev = std::sqrt(var / static_cast<double>(n));
        s.means[c] = mean;
        s.stdevs[c] = stdev < 1e-12 ? 1.0 : stdev;
    }
    return s;
}

Dataset Standardizer::apply(const Dataset& d) const {
    Dataset out = d;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            out.features(i, c) = (d.features(i, c) - means[c]) / stdevs[c];
    return out;
}

Dataset Standardizer::invert(const Dataset& d) const {
    Dataset out = d;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            out.features(i, c) = d.features(i, c) * stdevs[c] + means[c];
    return out;
}

void Standardizer::apply_in_place(std::vector<double>& feature_row) const {
    for (std::size_t c = 0; c < kFeatureCount && c < feature_row.size(); ++c)
        feature_row[c] = (feature_row[c] - means[c]) / stdevs[c];
}

} // namespace datl

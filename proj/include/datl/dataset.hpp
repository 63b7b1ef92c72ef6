#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "datl/linalg.hpp"
#include "datl/worldbank.hpp"

namespace datl {

inline constexpr std::size_t kFeatureCount = 4;

// Channel order is fixed: the three fuel shares, then total emissions per
// capita, then the GDP label.
enum class Channel { GasPct = 0, LiquidPct = 1, SolidPct = 2, Co2PerCapita = 3, GdpPerCapita = 4 };

std::string channel_name(Channel c);

// Per-country aligned time series. All five channels share the same year
// axis; a nullopt is a missing observation.
struct CountrySeries {
    std::string country_code;
    std::vector<int> years; // sorted ascending, unique
    std::array<std::vector<std::optional<double>>, 5> channels;

    const std::vector<std::optional<double>>& channel(Channel c) const {
        return channels[static_cast<std::size_t>(c)];
    }
    std::size_t size() const { return years.size(); }

    // True when all four inputs and the label are present at index i.
    bool complete_at(std::size_t i) const;
    // True when the four input channels are present at index i.
    bool inputs_complete_at(std::size_t i) const;

    bool operator==(const CountrySeries&) const = default;
};

// Inclusive [first, last] runs of consecutive years with a missing GDP label.
std::vector<std::pair<int, int>> missing_gdp_windows(const CountrySeries& series);

// Aligned feature matrix + labels, the unit the transfer pipeline operates
// on. Rows of a single-country dataset are strictly increasing by year.
struct Dataset {
    std::vector<int> years;
    Matrix features; // N x 4, column order per Channel
    std::vector<double> labels;
    std::vector<std::string> origin_tags;

    std::size_t size() const { return years.size(); }
    bool operator==(const Dataset& o) const {
        return years == o.years && features == o.features && labels == o.labels &&
               origin_tags == o.origin_tags;
    }
};

// The five tables must come in channel order (gas, liquid, solid, co2pc, gdp).
CountrySeries build_country_series(const std::array<RawIndicatorTable, 5>& tables,
                                   const std::string& country_code);

// Keeps exactly the years where all four inputs and the label are present.
// Throws EmptyDatasetError when no year is complete.
Dataset to_training_dataset(const CountrySeries& series);

// Feature-only dataset over the requested years; labels hold a sentinel (0)
// the caller never reads. Every requested year must have all four inputs.
Dataset to_prediction_dataset(const CountrySeries& series, const std::vector<int>& years);

// Column-wise z-score transform fitted on a training set. Constant columns
// (stdev < 1e-12) keep stdev 1 so they pass through unchanged.
struct Standardizer {
    std::array<double, kFeatureCount> means{};
    std::array<double, kFeatureCount> stdevs{};

    static Standardizer fit(const Dataset& train);
    Dataset apply(const Dataset& d) const;
    Dataset invert(const Dataset& d) const;
    void apply_in_place(std::vector<double>& feature_row) const;
};

} // namespace datl

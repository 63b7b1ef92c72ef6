// Regenerates the bundled data snapshot under data/worldbank_snapshot/.
//
// The snapshot is synthetic but follows the real wide CSV layout (metadata
// preamble, quoted fields, one column per year) and the real coverage
// pattern: the four experiment economies have complete data for 1960-2013,
// and the seven estimation countries have GDP gaps over their documented
// missing windows while their emission inputs stay complete.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "datl/digest.hpp"
#include "datl/rng.hpp"

namespace {

constexpr int kFirstYear = 1960;
constexpr int kLastYear = 2014;

struct CountryParams {
    std::string name;
    std::string code;
    double gdp1960;                  // per-capita GDP at the window start, US$
    double gdp_growth;               // mean nominal growth per year
    double gdp_vol;                  // growth noise
    double co2pc1960;                // metric tons per person at the window start
    double co2pc_trend;              // log trend per year
    std::array<double, 3> mix1960;   // gas/liquid/solid share logits
    std::array<double, 3> mix_drift; // logit drift per year
    std::vector<std::pair<int, int>> gdp_gaps; // GDP cells blanked inside these windows
    bool inputs_end_2013 = false;    // channels stop at 2013, like the real exports
};

struct Snapshot {
    // channel -> country code -> year -> value (absent = empty cell)
    std::map<std::string, std::map<std::string, std::map<int, double>>> values;
};

bool in_gap(const CountryParams& c, int year) {
    for (const auto& [a, b] : c.gdp_gaps)
        if (year >= a && year <= b) return true;
    return false;
}

Snapshot generate(const std::vector<CountryParams>& countries, std::uint64_t seed) {
    Snapshot snap;
    for (const auto& c : countries) {
        datl::Rng rng(seed ^ datl::fnv1a64(c.code));
        double gdp = c.gdp1960;
        double log_co2 = std::log(c.co2pc1960);
        std::array<double, 3> logits = c.mix1960;
        for (int year = kFirstYear; year <= kLastYear; ++year) {
            if (year > kFirstYear) {
                gdp *= 1.0 + c.gdp_growth + c.gdp_vol * rng.normal();
                log_co2 += c.co2pc_trend + 0.02 * rng.normal();
                for (std::size_t i = 0; i < 3; ++i)
                    logits[i] += c.mix_drift[i] + 0.01 * rng.normal();
            }
            double co2 = std::exp(log_co2);
            double z = std::exp(logits[0]) + std::exp(logits[1]) + std::exp(logits[2]);
            std::array<double, 3> shares{100.0 * std::exp(logits[0]) / z,
                                         100.0 * std::exp(logits[1]) / z,
                                         100.0 * std::exp(logits[2]) / z};

            bool inputs_here = !(c.inputs_end_2013 && year > 2013);
            if (inputs_here) {
                snap.values["gas"][c.code][year] = shares[0];
                snap.values["liquid"][c.code][year] = shares[1];
                snap.values["solid"][c.code][year] = shares[2];
                snap.values["co2pc"][c.code][year] = co2;
            }
            bool gdp_here = !in_gap(c, year) && !(c.inputs_end_2013 && year > 2013);
            if (gdp_here) snap.values["gdp"][c.code][year] = gdp;
        }
    }
    return snap;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_indicator(const std::filesystem::path& path, const std::string& indicator_name,
                     const std::string& indicator_code,
                     const std::vector<CountryParams>& countries,
                     const std::map<std::string, std::map<int, double>>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "\"Data Source\",\"World Development Indicators\",\n\n";
    out << "\"Last Updated Date\",\"2016-11-15\",\n\n";
    out << "\"Country Name\",\"Country Code\",\"Indicator Name\",\"Indicator Code\"";
    for (int year = kFirstYear; year <= kLastYear; ++year) out << ",\"" << year << "\"";
    out << ",\n";

    // Rows sorted by display name, like the real exports.
    std::vector<const CountryParams*> order;
    for (const auto& c : countries) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const CountryParams* a, const CountryParams* b) { return a->name < b->name; });

    for (const CountryParams* c : order) {
        out << "\"" << c->name << "\",\"" << c->code << "\",\"" << indicator_name << "\",\""
            << indicator_code << "\"";
        auto it = data.find(c->code);
        for (int year = kFirstYear; year <= kLastYear; ++year) {
            out << ",";
            if (it == data.end()) continue;
            auto jt = it->second.find(year);
            if (jt != it->second.end()) out << "\"" << csv_number(jt->second) << "\"";
        }
        out << ",\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    std::filesystem::path out_dir = argc > 1 ? argv[1] : "data/worldbank_snapshot";
    std::filesystem::create_directories(out_dir);

    std::vector<CountryParams> countries = {
        // Experiment economies.
        {"Cameroon", "CMR", 120.0, 0.050, 0.035, 0.10, 0.020,
         {-1.2, 1.6, -1.0}, {0.010, -0.002, -0.004}, {}, true},
        {"European Union", "EU", 900.0, 0.068, 0.030, 5.4, 0.004,
         {-0.8, 0.9, 0.3}, {0.022, -0.004, -0.016}, {}, true},
        {"India", "IND", 82.0, 0.052, 0.030, 0.27, 0.031,
         {-1.6, 0.2, 0.9}, {0.008, 0.002, 0.002}, {}, true},
        {"United States", "USA", 3000.0, 0.054, 0.025, 15.7, 0.001,
         {0.1, 0.7, 0.2}, {0.009, -0.005, -0.012}, {}, true},
        // Estimation countries.
        {"Afghanistan", "AFG", 60.0, 0.044, 0.050, 0.05, 0.020,
         {-0.5, 1.0, -0.6}, {0.004, -0.001, -0.002}, {{1982, 2000}}, false},
        {"Iraq", "IRQ", 400.0, 0.046, 0.060, 1.6, 0.018,
         {-0.6, 1.4, -1.8}, {0.010, -0.001, -0.004}, {{1965, 1967}, {1991, 2003}}, false},
        {"Myanmar", "MMR", 180.0, 0.036, 0.045, 0.12, 0.016,
         {-0.2, 0.8, -0.4}, {0.012, -0.003, -0.002}, {{1960, 1999}}, false},
        {"Poland", "POL", 580.0, 0.058, 0.035, 3.9, 0.009,
         {-1.4, -0.4, 1.6}, {0.010, 0.004, -0.010}, {{1960, 1989}}, false},
        {"Switzerland", "CHE", 1700.0, 0.060, 0.028, 3.2, 0.006,
         {-1.0, 1.5, -0.9}, {0.014, -0.004, -0.010}, {{1970, 1979}}, false},
        {"Syrian Arab Republic", "SYR", 160.0, 0.050, 0.055, 0.9, 0.018,
         {-0.7, 1.3, -1.5}, {0.016, -0.004, -0.004}, {{2008, 2014}}, false},
        {"Yemen, Rep.", "YEM", 150.0, 0.042, 0.055, 0.30, 0.016,
         {-1.1, 1.5, -2.2}, {0.012, -0.002, -0.002}, {{1960, 1989}}, false},
    };

    Snapshot snap = generate(countries, 20161115ULL);

    write_indicator(out_dir / "co2_gaseous_pct.csv",
                    "CO2 emissions from gaseous fuel consumption (% of total)",
                    "EN.ATM.CO2E.GF.ZS", countries, snap.values["gas"]);
    write_indicator(out_dir / "co2_liquid_pct.csv",
                    "CO2 emissions from liquid fuel consumption (% of total)",
                    "EN.ATM.CO2E.LF.ZS", countries, snap.values["liquid"]);
    write_indicator(out_dir / "co2_solid_pct.csv",
                    "CO2 emissions from solid fuel consumption (% of total)",
                    "EN.ATM.CO2E.SF.ZS", countries, snap.values["solid"]);
    write_indicator(out_dir / "co2_metric_tons_pc.csv", "CO2 emissions (metric tons per capita)",
                    "EN.ATM.CO2E.PC", countries, snap.values["co2pc"]);
    write_indicator(out_dir / "gdp_per_capita_usd.csv", "GDP per capita (current US$)",
                    "NY.GDP.PCAP.CD", countries, snap.values["gdp"]);

    std::cout << "wrote snapshot to " << out_dir << "\n";
    return 0;
}

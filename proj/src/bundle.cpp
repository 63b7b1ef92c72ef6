#include "datl/bundle.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "datl/digest.hpp"
#include "datl/errors.hpp"
#include "datl/worldbank.hpp"

namespace datl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

DatasetBundle ingest(const RunConfig& cfg) {
    std::array<RawIndicatorTable, 5> tables;
    std::map<std::string, std::string> digests;
    for (std::size_t i = 0; i < cfg.indicators.size(); ++i) {
        const auto& src = cfg.indicators[i];
        std::string text = read_file(src.path);
        digests[src.role] = digest_hex(text);
        try {
            tables[i] = parse_worldbank_csv(text, src.code, cfg.year_window);
        } catch (const Error& e) {
            throw ParseError(src.path.string() + " (role " + src.role + "): " + e.what());
        }
    }

    std::set<std::string> wanted(cfg.countries.begin(), cfg.countries.end());
    wanted.insert(cfg.missing_countries.begin(), cfg.missing_countries.end());
    wanted.insert(cfg.candidate_sources.begin(), cfg.candidate_sources.end());

    DatasetBundle bundle;
    bundle.year_window = cfg.year_window;
    for (const auto& code : wanted) bundle.series[code] = build_country_series(tables, code);
    bundle.manifest = RunManifest::create(cfg.seed, cfg.echo, digests);
    return bundle;
}

json to_json(const DatasetBundle& bundle) {
    json series = json::object();
    for (const auto& [code, s] : bundle.series) {
        json channels = json::object();
        for (std::size_t c = 0; c < s.channels.size(); ++c) {
            json values = json::array();
            for (const auto& v : s.channels[c]) values.push_back(v ? json(*v) : json(nullptr));
            channels[channel_name(static_cast<Channel>(c))] = values;
        }
        series[code] = json{{"years", s.years}, {"channels", channels}};
    }
    return json{{"year_window", {bundle.year_window.first, bundle.year_window.second}},
                {"series", series},
                {"manifest", to_json(bundle.manifest)}};
}

DatasetBundle bundle_from_json(const json& j) {
    DatasetBundle bundle;
    auto w = j.at("year_window").get<std::vector<int>>();
    bundle.year_window = {w.at(0), w.at(1)};
    for (const auto& [code, js] : j.at("series").items()) {
        CountrySeries s;
        s.country_code = code;
        s.years = js.at("years").get<std::vector<int>>();
        for (std::size_t c = 0; c < s.channels.size(); ++c) {
            const json& values = js.at("channels").at(channel_name(static_cast<Channel>(c)));
            for (const auto& v : values)
                s.channels[c].push_back(v.is_null() ? std::optional<double>{}
                                                    : std::optional<double>{v.get<double>()});
        }
        bundle.series[code] = std::move(s);
    }
    bundle.manifest = manifest_from_json(j.at("manifest"));
    return bundle;
}

void save_bundle(const DatasetBundle& bundle, const fs::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write bundle to " + path.string());
    out << to_json(bundle).dump(2) << "\n";
}

DatasetBundle load_bundle(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open bundle " + path.string() + " (run the ingest command first)");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("bundle " + path.string() + " is not valid JSON: " + e.what());
    }
    return bundle_from_json(doc);
}

std::string completeness_csv(const DatasetBundle& bundle) {
    std::string csv = "country,channel,present_years,missing_ranges\n";
    for (const auto& [code, s] : bundle.series) {
        for (std::size_t c = 0; c < s.channels.size(); ++c) {
            std::size_t present = 0;
            std::vector<std::pair<int, int>> gaps;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (s.channels[c][i].has_value()) {
                    ++present;
                    continue;
                }
                int year = s.years[i];
                if (!gaps.empty() && gaps.back().second == year - 1)
                    gaps.back().second = year;
                else
                    gaps.emplace_back(year, year);
            }
            std::string ranges;
            for (const auto& [a, b] : gaps) {
                if (!ranges.empty()) ranges += ";";
                ranges += a == b ? std::to_string(a)
                                 : std::to_string(a) + "-" + std::to_string(b);
            }
            csv += code + "," + channel_name(static_cast<Channel>(c)) + "," +
                   std::to_string(present) + "," + ranges + "\n";
        }
    }
    return csv;
}

} // namespace datl

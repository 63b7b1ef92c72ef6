#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "datl/config.hpp"
#include "datl/dataset.hpp"
#include "datl/report.hpp"

namespace datl {

// Ingestion output: validated per-country series plus the manifest of the
// files they came from. This is what the run commands consume.
struct DatasetBundle {
    YearWindow year_window{1960, 2013};
    std::map<std::string, CountrySeries> series;
    RunManifest manifest;
};

// Parses the five configured indicator files and materializes a series for
// every configured country (experiment set plus missing-GDP set).
DatasetBundle ingest(const RunConfig& cfg);

nlohmann::json to_json(const DatasetBundle& bundle);
DatasetBundle bundle_from_json(const nlohmann::json& j);

void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& path);
DatasetBundle load_bundle(const std::filesystem::path& path);

// Per-country, per-channel missing-year ranges, one CSV row each.
std::string completeness_csv(const DatasetBundle& bundle);

} // namespace datl

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "datl/transfer.hpp"

namespace datl {

// Provenance block attached to every report tree. The timestamp honors
// SOURCE_DATE_EPOCH so seeded runs can be byte-reproducible.
struct RunManifest {
    std::string tool_version;
    std::uint64_t seed = 0;
    std::string timestamp;
    nlohmann::json config_echo;
    std::map<std::string, std::string> input_digests;

    static RunManifest create(std::uint64_t seed, nlohmann::json config_echo,
                              std::map<std::string, std::string> input_digests);
    bool operator==(const RunManifest&) const = default;
};

// Published comparison values for the missing-GDP countries: winning method,
// source domain, and validation RMSE / R^2 / RRMSE.
std::optional<CandidateRow> reference_baseline(const std::string& country_code);

// JSON codecs. JSON is the authoritative report format; every CSV is a
// derived view.
nlohmann::json to_json(const Fraction& f);
Fraction fraction_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalMetrics& m);
EvalMetrics eval_metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalReport& r);
EvalReport eval_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TdSweepTable& t);
TdSweepTable td_sweep_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CandidateRow& r);
CandidateRow candidate_row_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MissingEstimateReport& r);
MissingEstimateReport missing_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

// "No_TD" for zero, "1/3*TD" style otherwise.
std::string fraction_label(const Fraction& f);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Writes report.json (manifest + experiments + optional notes), summary.csv,
// and one per-experiment plot CSV under pairs/.
void write_eval_reports(const std::vector<EvalReport>& reports, const RunManifest& manifest,
                        const std::filesystem::path& dir,
                        const nlohmann::json& notes = nlohmann::json());

// Writes report.json, td_sweep.csv (regressor rows x fraction columns), and
// td_improvement.csv.
void write_td_sweep(const TdSweepTable& table, const RunManifest& manifest,
                    const std::filesystem::path& dir);

// Writes report.json, candidates.csv, estimates.csv, and windows.csv for one
// country under `dir`.
void write_missing_report(const MissingEstimateReport& report, const RunManifest& manifest,
                          const std::filesystem::path& dir);

// Re-renders the derived CSVs out of an existing report.json document.
// Returns the number of CSV files written.
std::size_t render_csvs_from_json(const nlohmann::json& document,
                                  const std::filesystem::path& dir);

} // namespace datl

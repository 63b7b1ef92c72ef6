#include "datl/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include "datl/errors.hpp"
#include "datl/version.hpp"

namespace datl {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw IoError("format_double failed");
    return std::string(buf, ptr);
}

RunManifest RunManifest::create(std::uint64_t seed, json config_echo,
                                std::map<std::string, std::string> input_digests) {
    RunManifest m;
    m.tool_version = kToolVersion;
    m.seed = seed;
    m.config_echo = std::move(config_echo);
    m.input_digests = std::move(input_digests);

    std::time_t now;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
        now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    m.timestamp = buf;
    return m;
}

std::optional<CandidateRow> reference_baseline(const std::string& country_code) {
    static const std::map<std::string, CandidateRow> table = {
        {"AFG", {Method::Svr, "IND", {49.21, 0.48, 0.24}}},
        {"IRQ", {Method::Elm, "CMR", {2080.72, 0.44, 1.07}}},
        {"MMR", {Method::Elm, "EU", {201.03, 0.74, 0.67}}},
        {"SYR", {Method::Grnn, "IND", {410.94, 0.51, 0.54}}},
        {"YEM", {Method::Grnn, "CMR", {399.01, 0.69, 0.30}}},
        {"CHE", {Method::Elm, "EU", {9462.41, 0.94, 0.38}}},
        {"POL", {Method::Grnn, "USA", {793.79, 0.90, 0.20}}},
    };
    auto it = table.find(country_code);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

json to_json(const Fraction& f) { return f.str(); }
Fraction fraction_from_json(const json& j) { return Fraction::parse(j.get<std::string>()); }

json to_json(const EvalMetrics& m) {
    return json{{"rmse", m.rmse}, {"r2", m.r2}, {"rrmse", m.rrmse}};
}

EvalMetrics eval_metrics_from_json(const json& j) {
    return EvalMetrics{j.at("rmse").get<double>(), j.at("r2").get<double>(),
                       j.at("rrmse").get<double>()};
}

json to_json(const EvalReport& r) {
    json per_year = json::array();
    for (const auto& p : r.per_year) per_year.push_back({p.year, p.actual, p.predicted});
    json out{{"source", r.source_code},
             {"target", r.target_code},
             {"regressor", method_name(r.method)},
             {"td_fraction", to_json(r.td_fraction)},
             {"mixing_policy", mixing_policy_name(r.mixing_policy)},
             {"seed", r.seed},
             {"chosen_hyperparameters", r.chosen},
             {"metrics", to_json(r.full)},
             {"mixed_target_years", r.mixed_target_years},
             {"per_year", per_year}};
    out["heldout_metrics"] = r.heldout ? to_json(*r.heldout) : json(nullptr);
    return out;
}

EvalReport eval_report_from_json(const json& j) {
    EvalReport r;
    r.source_code = j.at("source").get<std::string>();
    r.target_code = j.at("target").get<std::string>();
    r.method = method_from_name(j.at("regressor").get<std::string>());
    r.td_fraction = fraction_from_json(j.at("td_fraction"));
    r.mixing_policy = mixing_policy_from_name(j.at("mixing_policy").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.chosen = j.at("chosen_hyperparameters").get<Hyperparameters>();
    r.full = eval_metrics_from_json(j.at("metrics"));
    if (!j.at("heldout_metrics").is_null())
        r.heldout = eval_metrics_from_json(j.at("heldout_metrics"));
    r.mixed_target_years = j.at("mixed_target_years").get<std::vector<int>>();
    for (const auto& p : j.at("per_year"))
        r.per_year.push_back({p.at(0).get<int>(), p.at(1).get<double>(), p.at(2).get<double>()});
    return r;
}

json to_json(const TdSweepTable& t) {
    json methods = json::array();
    for (Method m : t.methods) methods.push_back(method_name(m));
    json fractions = json::array();
    for (const auto& f : t.fractions) fractions.push_back(to_json(f));
    json cells = json::array();
    for (const auto& row : t.cells) {
        json jrow = json::array();
        for (const auto& cell : row) {
            json pair_rmses = json::object();
            for (const auto& [name, v] : cell.pair_rmses) pair_rmses[name] = v;
            jrow.push_back(json{{"mean_rmse", cell.mean_rmse},
                                {"run_count", cell.run_count},
                                {"failure_count", cell.failure_count},
                                {"pair_rmses", pair_rmses}});
        }
        cells.push_back(jrow);
    }
    json out{{"methods", methods}, {"fractions", fractions}, {"cells", cells}};
    out["improvements"] = t.improvements ? json(*t.improvements) : json(nullptr);
    return out;
}

TdSweepTable td_sweep_from_json(const json& j) {
    TdSweepTable t;
    for (const auto& m : j.at("methods")) t.methods.push_back(method_from_name(m.get<std::string>()));
    for (const auto& f : j.at("fractions")) t.fractions.push_back(fraction_from_json(f));
    for (const auto& jrow : j.at("cells")) {
        std::vector<TdSweepCell> row;
        for (const auto& jc : jrow) {
            TdSweepCell cell;
            cell.mean_rmse = jc.at("mean_rmse").get<double>();
            cell.run_count = jc.at("run_count").get<std::size_t>();
            cell.failure_count = jc.at("failure_count").get<std::size_t>();
            for (const auto& [name, v] : jc.at("pair_rmses").items())
                cell.pair_rmses.emplace_back(name, v.get<double>());
            row.push_back(std::move(cell));
        }
        t.cells.push_back(std::move(row));
    }
    if (!j.at("improvements").is_null())
        t.improvements = j.at("improvements").get<std::vector<std::vector<double>>>();
    return t;
}

json to_json(const CandidateRow& r) {
    return json{{"regressor", method_name(r.method)},
                {"source", r.source_code},
                {"rmse", r.metrics.rmse},
                {"r2", r.metrics.r2},
                {"rrmse", r.metrics.rrmse}};
}

CandidateRow candidate_row_from_json(const json& j) {
    CandidateRow r;
    r.method = method_from_name(j.at("regressor").get<std::string>());
    r.source_code = j.at("source").get<std::string>();
    r.metrics = EvalMetrics{j.at("rmse").get<double>(), j.at("r2").get<double>(),
                            j.at("rrmse").get<double>()};
    return r;
}

json to_json(const MissingEstimateReport& r) {
    json windows = json::array();
    for (const auto& [a, b] : r.missing_windows) windows.push_back({a, b});
    json candidates = json::array();
    for (const auto& c : r.candidates) candidates.push_back(to_json(c));
    json estimates = json::array();
    for (const auto& [year, v] : r.estimates) estimates.push_back({json(year), json(v)});
    json out{{"country", r.country_code},
             {"nothing_to_do", r.nothing_to_do},
             {"missing_windows", windows},
             {"validation_years", r.validation_years},
             {"candidates", candidates},
             {"estimates", estimates}};
    out["selected"] = r.selected ? to_json(*r.selected) : json(nullptr);
    auto baseline = reference_baseline(r.country_code);
    out["reference_baseline"] = baseline ? to_json(*baseline) : json(nullptr);
    return out;
}

MissingEstimateReport missing_report_from_json(const json& j) {
    MissingEstimateReport r;
    r.country_code = j.at("country").get<std::string>();
    r.nothing_to_do = j.at("nothing_to_do").get<bool>();
    for (const auto& w : j.at("missing_windows"))
        r.missing_windows.emplace_back(w.at(0).get<int>(), w.at(1).get<int>());
    r.validation_years = j.at("validation_years").get<std::vector<int>>();
    for (const auto& c : j.at("candidates")) r.candidates.push_back(candidate_row_from_json(c));
    if (!j.at("selected").is_null()) r.selected = candidate_row_from_json(j.at("selected"));
    for (const auto& e : j.at("estimates"))
        r.estimates.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
    return r;
}

json to_json(const RunManifest& m) {
    return json{{"tool_version", m.tool_version},
                {"seed", m.seed},
                {"timestamp", m.timestamp},
                {"config", m.config_echo},
                {"input_digests", m.input_digests}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.config_echo = j.at("config");
    m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
    return m;
}

std::string fraction_label(const Fraction& f) {
    if (f.num == 0) return "No_TD";
    return f.str() + "*TD";
}

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

void write_json_file(const fs::path& path, const json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

std::string summary_csv(const std::vector<EvalReport>& reports) {
    std::string csv = "source,target,regressor,td_fraction,rmse,r2,rrmse\n";
    for (const auto& r : reports) {
        csv += r.source_code + "," + r.target_code + "," + method_name(r.method) + "," +
               r.td_fraction.str() + "," + format_double(r.full.rmse) + "," +
               format_double(r.full.r2) + "," + format_double(r.full.rrmse) + "\n";
    }
    return csv;
}

std::string per_year_csv(const EvalReport& r) {
    std::string csv = "year,actual,predicted\n";
    for (const auto& p : r.per_year)
        csv += std::to_string(p.year) + "," + format_double(p.actual) + "," +
               format_double(p.predicted) + "\n";
    return csv;
}

std::string pair_file_name(const EvalReport& r) {
    return r.source_code + "-to-" + r.target_code + "-" + method_name(r.method) + ".csv";
}

void write_eval_csvs(const std::vector<EvalReport>& reports, const fs::path& dir) {
    write_text_file(dir / "summary.csv", summary_csv(reports));
    for (const auto& r : reports) write_text_file(dir / "pairs" / pair_file_name(r), per_year_csv(r));
}

void write_sweep_csvs(const TdSweepTable& table, const fs::path& dir) {
    std::string head = "regressor";
    for (const auto& f : table.fractions) head += "," + fraction_label(f);
    std::string csv = head + "\n";
    for (std::size_t r = 0; r < table.methods.size(); ++r) {
        csv += method_name(table.methods[r]);
        for (std::size_t f = 0; f < table.fractions.size(); ++f)
            csv += "," + format_double(table.cells[r][f].mean_rmse);
        csv += "\n";
    }
    write_text_file(dir / "td_sweep.csv", csv);

    if (table.improvements) {
        std::string ihead = "regressor";
        for (const auto& f : table.fractions) ihead += ",No_TD→" + fraction_label(f);
        std::string icsv = ihead + "\n";
        for (std::size_t r = 0; r < table.methods.size(); ++r) {
            icsv += method_name(table.methods[r]);
            for (std::size_t f = 0; f < table.fractions.size(); ++f)
                icsv += "," + format_double((*table.improvements)[r][f]);
            icsv += "\n";
        }
        write_text_file(dir / "td_improvement.csv", icsv);
    }
}

void write_missing_csvs(const MissingEstimateReport& report, const fs::path& dir) {
    std::string candidates = "regressor,source,rmse,r2,rrmse\n";
    for (const auto& c : report.candidates)
        candidates += method_name(c.method) + "," + c.source_code + "," +
                      format_double(c.metrics.rmse) + "," + format_double(c.metrics.r2) + "," +
                      format_double(c.metrics.rrmse) + "\n";
    write_text_file(dir / "candidates.csv", candidates);

    std::string estimates = "year,predicted_gdp\n";
    for (const auto& [year, v] : report.estimates)
        estimates += std::to_string(year) + "," + format_double(v) + "\n";
    write_text_file(dir / "estimates.csv", estimates);

    std::string windows = "country,start_year,end_year\n";
    for (const auto& [a, b] : report.missing_windows)
        windows += report.country_code + "," + std::to_string(a) + "," + std::to_string(b) + "\n";
    write_text_file(dir / "windows.csv", windows);
}

} // namespace

void write_eval_reports(const std::vector<EvalReport>& reports, const RunManifest& manifest,
                        const fs::path& dir, const json& notes) {
    if (reports.empty()) throw DomainError("write_eval_reports: no reports to write");
    json doc{{"manifest", to_json(manifest)}};
    json experiments = json::array();
    for (const auto& r : reports) experiments.push_back(to_json(r));
    doc["experiments"] = experiments;
    if (!notes.is_null()) doc["notes"] = notes;
    write_json_file(dir / "report.json", doc);
    write_eval_csvs(reports, dir);
}

void write_td_sweep(const TdSweepTable& table, const RunManifest& manifest, const fs::path& dir) {
    if (table.methods.empty() || table.fractions.empty())
        throw DomainError("write_td_sweep: empty table");
    json doc{{"manifest", to_json(manifest)}, {"td_sweep", to_json(table)}};
    write_json_file(dir / "report.json", doc);
    write_sweep_csvs(table, dir);
}

void write_missing_report(const MissingEstimateReport& report, const RunManifest& manifest,
                          const fs::path& dir) {
    json doc{{"manifest", to_json(manifest)}, {"missing_estimate", to_json(report)}};
    write_json_file(dir / "report.json", doc);
    write_missing_csvs(report, dir);
}

std::size_t render_csvs_from_json(const json& document, const fs::path& dir) {
    std::size_t written = 0;
    if (document.contains("experiments")) {
        std::vector<EvalReport> reports;
        for (const auto& e : document.at("experiments"))
            reports.push_back(eval_report_from_json(e));
        write_eval_csvs(reports, dir);
        written += 1 + reports.size();
    }
    if (document.contains("td_sweep")) {
        TdSweepTable table = td_sweep_from_json(document.at("td_sweep"));
        write_sweep_csvs(table, dir);
        written += table.improvements ? 2 : 1;
    }
    if (document.contains("missing_estimate")) {
        MissingEstimateReport report = missing_report_from_json(document.at("missing_estimate"));
        write_missing_csvs(report, dir);
        written += 3;
    }
    return written;
}

} // namespace datl

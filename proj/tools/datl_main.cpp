#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "datl/bundle.hpp"
#include "datl/config.hpp"
#include "datl/digest.hpp"
#include "datl/errors.hpp"
#include "datl/report.hpp"
#include "datl/transfer.hpp"
#include "datl/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitNumeric = 3;

struct CliOptions {
    std::string config_path;
    std::string workdir;
    std::string out_dir;
    std::string bundle_path;
    std::string run_id;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned jobs = 1;
};

struct LoadedConfig {
    datl::RunConfig cfg;
    fs::path workdir;
};

LoadedConfig load(const CliOptions& opts) {
    if (opts.config_path.empty()) throw datl::ConfigError("--config is required");
    fs::path config_path = opts.config_path;
    fs::path workdir = opts.workdir.empty()
                           ? (config_path.has_parent_path() ? config_path.parent_path()
                                                            : fs::path("."))
                           : fs::path(opts.workdir);
    datl::RunConfig cfg = datl::load_config(config_path, workdir);
    if (const char* env = std::getenv("DATL_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.output_dir = fs::path(opts.out_dir);
    if (!opts.bundle_path.empty()) cfg.bundle_path = fs::path(opts.bundle_path);
    return LoadedConfig{std::move(cfg), workdir};
}

std::string derive_run_id(const CliOptions& opts, const datl::RunConfig& cfg,
                          const std::string& command, const std::string& extra) {
    if (!opts.run_id.empty()) return opts.run_id;
    std::string key =
        command + "|" + extra + "|" + std::to_string(cfg.seed) + "|" + cfg.echo.dump();
    std::string digest = datl::digest_hex(key);
    return command + "-" + digest.substr(digest.size() - 8);
}

std::string metrics_line(const datl::EvalReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s-to-%s %s f=%s RMSE=%.6g R2=%.6g RRMSE=%.6g",
                  r.source_code.c_str(), r.target_code.c_str(),
                  datl::method_name(r.method).c_str(), r.td_fraction.str().c_str(), r.full.rmse,
                  r.full.r2, r.full.rrmse);
    return buf;
}

std::string known_codes(const datl::DatasetBundle& bundle) {
    std::string out;
    for (const auto& [code, _] : bundle.series) {
        if (!out.empty()) out += ", ";
        out += code;
    }
    return out;
}

const datl::CountrySeries& series_or_fail(const datl::DatasetBundle& bundle,
                                          const std::string& code) {
    auto it = bundle.series.find(code);
    if (it == bundle.series.end())
        throw datl::ConfigError("unknown country code '" + code +
                                "'; known codes: " + known_codes(bundle));
    return it->second;
}

datl::CountryData training_data(const datl::DatasetBundle& bundle,
                                const std::vector<std::string>& codes) {
    datl::CountryData out;
    for (const auto& code : codes)
        out.emplace_back(code, datl::to_training_dataset(series_or_fail(bundle, code)));
    return out;
}

datl::RegressorSpec find_regressor(const datl::RunConfig& cfg, const std::string& name) {
    datl::Method m = datl::method_from_name(name);
    for (const auto& spec : cfg.regressors)
        if (spec.method == m) return spec;
    datl::RegressorSpec spec;
    spec.method = m;
    return spec;
}

int cmd_ingest(const CliOptions& opts) {
    auto [cfg, workdir] = load(opts);
    datl::DatasetBundle bundle = datl::ingest(cfg);
    datl::save_bundle(bundle, cfg.bundle_path);

    fs::path completeness = cfg.bundle_path.parent_path() / "completeness.csv";
    std::ofstream out(completeness, std::ios::binary | std::ios::trunc);
    if (!out) throw datl::IoError("cannot write " + completeness.string());
    out << datl::completeness_csv(bundle);

    std::cout << "ingested " << bundle.series.size() << " country series over "
              << cfg.year_window.first << "-" << cfg.year_window.second << "\n"
              << "bundle: " << cfg.bundle_path.string() << "\n"
              << "completeness summary: " << completeness.string() << "\n";
    return kExitOk;
}

int cmd_run_pair(const CliOptions& opts, const std::string& source, const std::string& target,
                 const std::string& regressor, const std::string& td, bool allow_any_fraction) {
    auto [cfg, workdir] = load(opts);
    datl::DatasetBundle bundle = datl::load_bundle(cfg.bundle_path);

    datl::TransferConfig tc;
    tc.source_code = source;
    tc.target_code = target;
    tc.td_fraction = td.empty() ? cfg.td_fraction : datl::Fraction::parse(td);
    tc.mixing_policy = cfg.mixing_policy;
    tc.seed = cfg.seed;
    tc.regressor = find_regressor(cfg, regressor);
    if (!allow_any_fraction && tc.td_fraction.value() > 0.5)
        throw datl::ConfigError("td fraction " + tc.td_fraction.str() +
                                " is outside [0, 1/2]; pass --allow-any-fraction to override");

    datl::Dataset src = datl::to_training_dataset(series_or_fail(bundle, source));
    datl::Dataset tgt = datl::to_training_dataset(series_or_fail(bundle, target));
    datl::EvalReport report = datl::datl_run(src, tgt, tc);

    std::string run_id =
        derive_run_id(opts, cfg, "pair",
                      source + ":" + target + ":" + regressor + ":" + tc.td_fraction.str());
    fs::path dir = cfg.output_dir / run_id;
    datl::write_eval_reports({report}, bundle.manifest, dir);
    std::cout << metrics_line(report) << "\n";
    std::cout << "wrote " << dir.string() << "\n";
    return kExitOk;
}

json matrix_notes(const std::vector<datl::PairOutcome>& outcomes) {
    // Which method wins R^2 per pair, and how often that is grnn.
    std::map<std::string, std::pair<double, std::string>> best;
    std::set<std::string> pairs;
    for (const auto& out : outcomes) {
        if (!out.report) continue;
        std::string key = out.source_code + "-to-" + out.target_code;
        pairs.insert(key);
        double r2 = out.report->full.r2;
        auto it = best.find(key);
        if (it == best.end() || r2 > it->second.first)
            best[key] = {r2, datl::method_name(out.method)};
    }
    std::size_t grnn_wins = 0;
    json winners = json::object();
    for (const auto& [key, v] : best) {
        winners[key] = v.second;
        if (v.second == "grnn") ++grnn_wins;
    }
    return json{{"grnn_highest_r2",
                 json{{"count", grnn_wins},
                      {"pairs", pairs.size()},
                      {"reference_count", 10},
                      {"reference_pairs", 12},
                      {"winners", winners},
                      {"note", "Counts depend on the data snapshot (the bundled one is "
                               "synthetic), on hyperparameter search, and on the mixing "
                               "policy; none of those match the reference runs exactly."}}}};
}

int cmd_run_matrix(const CliOptions& opts) {
    auto [cfg, workdir] = load(opts);
    datl::DatasetBundle bundle = datl::load_bundle(cfg.bundle_path);
    datl::CountryData countries = training_data(bundle, cfg.countries);

    datl::TransferConfig defaults;
    defaults.td_fraction = cfg.td_fraction;
    defaults.mixing_policy = cfg.mixing_policy;
    defaults.seed = cfg.seed;

    auto outcomes = datl::pairwise_matrix(countries, cfg.regressors, defaults, opts.jobs);

    std::vector<datl::EvalReport> reports;
    std::size_t failures = 0;
    for (const auto& out : outcomes) {
        if (out.report) {
            reports.push_back(*out.report);
            std::cout << metrics_line(*out.report) << "\n";
        } else {
            ++failures;
            std::cerr << out.source_code << "-to-" << out.target_code << " "
                      << datl::method_name(out.method) << " FAILED: " << out.error << "\n";
        }
    }
    if (reports.empty()) throw datl::AllCandidatesFailedError("run-matrix: every run failed");

    std::string run_id = derive_run_id(opts, cfg, "matrix", "");
    fs::path dir = cfg.output_dir / run_id;
    datl::write_eval_reports(reports, bundle.manifest, dir, matrix_notes(outcomes));
    std::cout << "wrote " << dir.string() << "\n";
    return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_sweep_td(const CliOptions& opts) {
    auto [cfg, workdir] = load(opts);
    datl::DatasetBundle bundle = datl::load_bundle(cfg.bundle_path);
    datl::CountryData countries = training_data(bundle, cfg.countries);

    datl::TransferConfig defaults;
    defaults.mixing_policy = cfg.mixing_policy;
    defaults.seed = cfg.seed;

    auto fractions =
        cfg.sweep_fractions.empty() ? datl::default_sweep_fractions() : cfg.sweep_fractions;
    datl::TdSweepTable table =
        datl::td_sweep(countries, cfg.regressors, fractions, defaults, opts.jobs);

    std::size_t failures = 0;
    for (std::size_t r = 0; r < table.methods.size(); ++r) {
        std::string line = datl::method_name(table.methods[r]) + ":";
        for (std::size_t f = 0; f < table.fractions.size(); ++f) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), " %s=%.6g",
                          datl::fraction_label(table.fractions[f]).c_str(),
                          table.cells[r][f].mean_rmse);
            line += buf;
            failures += table.cells[r][f].failure_count;
        }
        std::cout << line << "\n";
    }

    std::string run_id = derive_run_id(opts, cfg, "sweep", "");
    fs::path dir = cfg.output_dir / run_id;
    datl::write_td_sweep(table, bundle.manifest, dir);
    std::cout << "wrote " << dir.string() << "\n";
    return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_estimate_missing(const CliOptions& opts, const std::string& country) {
    auto [cfg, workdir] = load(opts);
    datl::DatasetBundle bundle = datl::load_bundle(cfg.bundle_path);

    std::vector<std::string> targets =
        country.empty() ? cfg.missing_countries : std::vector<std::string>{country};
    if (targets.empty())
        throw datl::ConfigError("no country given and config has no missing_countries");

    std::string run_id = derive_run_id(opts, cfg, "missing", country);
    fs::path dir = cfg.output_dir / run_id;

    std::size_t failures = 0;
    for (const auto& code : targets) {
        const datl::CountrySeries& series = series_or_fail(bundle, code);
        std::vector<std::string> source_codes;
        for (const auto& s : cfg.candidate_sources)
            if (s != code) source_codes.push_back(s);
        datl::CountryData sources = training_data(bundle, source_codes);
        try {
            datl::MissingEstimateReport report = datl::estimate_missing(
                series, sources, cfg.regressors, cfg.seed, cfg.validation_split, opts.jobs);
            datl::write_missing_report(report, bundle.manifest, dir / "missing" / code);
            if (report.nothing_to_do) {
                std::cout << code << ": no missing GDP years with complete inputs\n";
            } else {
                char buf[256];
                std::snprintf(buf, sizeof(buf),
                              "%s: selected %s with source %s (validation RMSE=%.6g), %zu "
                              "windows, %zu estimated years",
                              code.c_str(), datl::method_name(report.selected->method).c_str(),
                              report.selected->source_code.c_str(),
                              report.selected->metrics.rmse, report.missing_windows.size(),
                              report.estimates.size());
                std::cout << buf << "\n";
            }
        } catch (const datl::Error& e) {
            ++failures;
            std::cerr << code << " FAILED: " << e.what() << "\n";
        }
    }
    std::cout << "wrote " << dir.string() << "\n";
    return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_report(const std::string& from, const std::string& out) {
    fs::path src = from;
    std::size_t written = 0;

    auto render_one = [&](const fs::path& json_path, const fs::path& dir) {
        std::ifstream in(json_path);
        if (!in) throw datl::IoError("cannot open " + json_path.string());
        json doc = json::parse(in);
        written += datl::render_csvs_from_json(doc, dir);
    };

    if (fs::is_directory(src)) {
        fs::path root_out = out.empty() ? src : fs::path(out);
        if (fs::exists(src / "report.json")) render_one(src / "report.json", root_out);
        fs::path missing = src / "missing";
        if (fs::is_directory(missing)) {
            std::vector<fs::path> dirs;
            for (const auto& entry : fs::directory_iterator(missing))
                if (entry.is_directory() && fs::exists(entry.path() / "report.json"))
                    dirs.push_back(entry.path());
            std::sort(dirs.begin(), dirs.end());
            for (const auto& d : dirs)
                render_one(d / "report.json", root_out / "missing" / d.filename());
        }
    } else {
        fs::path dir = out.empty() ? src.parent_path() : fs::path(out);
        render_one(src, dir);
    }
    if (written == 0) throw datl::ConfigError("no report.json found under " + src.string());
    std::cout << "re-rendered " << written << " csv files\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DATL-GDP: transfer-learning GDP prediction from fuel-emission series"};
    app.set_version_flag("--version", datl::kToolVersion);
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "path to the JSON config document");
    app.add_option("--workdir", opts.workdir,
                   "directory config paths resolve against (default: config file directory)");
    app.add_option("--out", opts.out_dir, "reports root (overrides config output_dir)");
    app.add_option("--bundle", opts.bundle_path, "bundle path (overrides config)");
    app.add_option("--run-id", opts.run_id, "fixed run id (default: derived from the config)");
    app.add_option("--seed", opts.seed, "seed override (beats DATL_SEED and config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    app.add_option("--jobs", opts.jobs, "parallel experiment runs")->check(CLI::PositiveNumber);

    auto* ingest = app.add_subcommand("ingest", "parse indicator files and write the bundle");

    auto* pair = app.add_subcommand("run-pair", "run one source-to-target experiment");
    std::string source, target, regressor = "grnn", td;
    bool allow_any_fraction = false;
    pair->add_option("--source", source, "source country code")->required();
    pair->add_option("--target", target, "target country code")->required();
    pair->add_option("--regressor", regressor, "grnn, elm, or svr");
    pair->add_option("--td", td, "target-data fraction as an exact rational, e.g. 1/3");
    pair->add_flag("--allow-any-fraction", allow_any_fraction,
                   "accept fractions outside [0, 1/2]");

    auto* matrix =
        app.add_subcommand("run-matrix", "run every ordered country pair with every regressor");
    auto* sweep = app.add_subcommand("sweep-td", "mean RMSE per regressor per mixing fraction");

    auto* missing = app.add_subcommand("estimate-missing", "estimate missing GDP values");
    std::string country;
    missing->add_option("--country", country,
                        "country code (default: every configured missing country)");

    auto* report = app.add_subcommand("report", "re-render CSVs from an existing report.json");
    std::string from, report_out;
    report->add_option("--from", from, "run directory or report.json path")->required();
    report->add_option("--out", report_out, "output directory (default: alongside the source)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(opts);
        if (pair->parsed())
            return cmd_run_pair(opts, source, target, regressor, td, allow_any_fraction);
        if (matrix->parsed()) return cmd_run_matrix(opts);
        if (sweep->parsed()) return cmd_sweep_td(opts);
        if (missing->parsed()) return cmd_estimate_missing(opts, country);
        if (report->parsed()) return cmd_report(from, report_out);
    } catch (const datl::ConvergenceFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const datl::NumericFailureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const datl::AllCandidatesFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const datl::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::UnknownCountryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const datl::EmptyDatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}

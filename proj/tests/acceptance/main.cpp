// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line each. Exits nonzero if any hard criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "datl/bundle.hpp"
#include "datl/config.hpp"
#include "datl/errors.hpp"
#include "datl/grnn.hpp"
#include "datl/metrics.hpp"
#include "datl/report.hpp"
#include "datl/rng.hpp"
#include "datl/svr.hpp"
#include "datl/transfer.hpp"
#include "support/synthetic.hpp"
#include "support/testutil.hpp"

namespace fs = std::filesystem;
using namespace datl;
using nlohmann::json;

namespace {

const std::string kCli = DATL_CLI_PATH;
const fs::path kSourceDir = DATL_SOURCE_DIR;

struct Harness {
    int failures = 0;

    void report(int number, const std::string& name, bool pass, const std::string& detail) {
        std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    template <typename Fn> void run(int number, const std::string& name, Fn&& fn) {
        std::string detail;
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(number, name, pass, detail);
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- criterion 1: exact metric values ---------------------------------------

bool exact_metrics(std::string& detail) {
    auto rel = [](double got, double want) {
        return std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want));
    };
    double a = rmse(PredictionPairs({4000.0}, {4400.0}));
    double b = rrmse(PredictionPairs({4000.0}, {4400.0}));
    double c = rrmse(PredictionPairs({100.0}, {500.0}));
    detail = "rmse=" + fmt(a) + " rrmse=" + fmt(b) + " rrmse2=" + fmt(c);
    return rel(a, 400.0) && rel(b, 0.1) && rel(c, 4.0);
}

// ---- criterion 2: mixed-domain cardinalities --------------------------------

bool mixed_cardinalities(std::string& detail) {
    Dataset source = testing::make_smooth_dataset(11, 20);
    Dataset target = testing::make_smooth_dataset(12, 54);
    const std::pair<Fraction, std::size_t> cases[] = {
        {Fraction(1, 18), 3}, {Fraction(1, 9), 6},  {Fraction(1, 6), 9},
        {Fraction(1, 3), 18}, {Fraction(1, 2), 27},
    };
    std::string got;
    bool ok = true;
    for (const auto& [f, expected] : cases) {
        TransferConfig cfg;
        cfg.td_fraction = f;
        auto mixed = construct_mixed_domain(source, target, cfg);
        ok = ok && mixed.mixed_target_years.size() == expected &&
             mixed.data.size() == source.size() + expected;
        got += f.str() + "->" + std::to_string(mixed.mixed_target_years.size()) + " ";
    }
    detail = got;
    return ok;
}

// ---- criterion 3: documented missing windows --------------------------------

bool missing_windows_match(std::string& detail) {
    RunConfig cfg = load_config(kSourceDir / "data" / "datl.json", kSourceDir / "data");
    DatasetBundle bundle = ingest(cfg);

    const std::map<std::string, std::vector<std::pair<int, int>>> expected = {
        {"AFG", {{1982, 2000}}},
        {"IRQ", {{1965, 1967}, {1991, 2003}}},
        {"MMR", {{1960, 1999}}},
        {"SYR", {{2008, 2014}}},
        {"YEM", {{1960, 1989}}},
        {"CHE", {{1970, 1979}}},
        {"POL", {{1960, 1989}}},
    };
    for (const auto& [code, want] : expected) {
        auto got = missing_gdp_windows(bundle.series.at(code));
        if (got != want) {
            detail = code + " windows differ";
            return false;
        }
    }
    detail = "7 countries match";
    return true;
}

// ---- criteria 4 and 5: SVR against the dense oracle, then KKT ----------------

struct SvrInstance {
    Dataset data;
    KernelSpec kernel = KernelSpec::rbf(1.0);
    double c = 1.0;
    double epsilon = 0.1;
};

std::vector<SvrInstance> svr_instances() {
    std::vector<SvrInstance> instances;
    Rng rng(20190501);
    const double cs[] = {0.5, 2.0, 10.0};
    const double epsilons[] = {0.0, 0.05, 0.2};
    const double gammas[] = {0.3, 1.0};
    for (int k = 0; k < 50; ++k) {
        SvrInstance inst;
        std::size_t n = 2 + rng.index(7); // 2..8
        inst.data.features = Matrix(n, kFeatureCount);
        for (std::size_t i = 0; i < n; ++i) {
            inst.data.years.push_back(static_cast<int>(i));
            for (std::size_t f = 0; f < kFeatureCount; ++f)
                inst.data.features(i, f) = rng.uniform(-1.0, 1.0);
            inst.data.labels.push_back(std::sin(2.0 * inst.data.features(i, 0)) +
                                       0.5 * inst.data.features(i, 1) + 0.3 * rng.normal());
            inst.data.origin_tags.push_back("I");
        }
        inst.kernel = KernelSpec::rbf(gammas[rng.index(2)]);
        inst.c = cs[rng.index(3)];
        inst.epsilon = epsilons[rng.index(3)];
        instances.push_back(std::move(inst));
    }
    return instances;
}

double oracle_bias(const SvrInstance& inst, const std::vector<double>& beta) {
    const std::size_t n = inst.data.size();
    Matrix k = kernel_matrix(inst.kernel, inst.data.features);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u[i] += k(i, j) * beta[j];
    const double margin = 1e-9 * inst.c;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i] > margin && beta[i] < inst.c - margin) {
            sum += inst.data.labels[i] - u[i] - inst.epsilon;
            ++count;
        } else if (beta[i] < -margin && beta[i] > -(inst.c - margin)) {
            sum += inst.data.labels[i] - u[i] + inst.epsilon;
            ++count;
        }
    }
    if (count > 0) return sum / static_cast<double>(count);
    double m = -1e300, mm = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        double lo_val = inst.data.labels[i] - u[i] - inst.epsilon;
        double hi_val = inst.data.labels[i] - u[i] + inst.epsilon;
        if (beta[i] < inst.c - margin) m = std::max(m, lo_val);
        if (beta[i] < -margin) m = std::max(m, hi_val);
        if (beta[i] > margin) mm = std::min(mm, lo_val);
        if (beta[i] > -(inst.c - margin)) mm = std::min(mm, hi_val);
    }
    return 0.5 * (m + mm);
}

bool svr_oracle_equivalence(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    double worst_obj = 0.0, worst_pred = 0.0;
    Rng probe_rng(4242);
    for (const auto& inst : svr_instances()) {
        SvrOptions opts;
        opts.tol = 1e-10;
        opts.max_updates = 2000000;
        SvrModel smo = svr_fit(inst.data, inst.kernel, inst.c, inst.epsilon, opts);
        QpSolution oracle = qp_oracle(inst.data, inst.kernel, inst.c, inst.epsilon);

        worst_obj = std::max(worst_obj, std::abs(smo.dual_objective - oracle.objective));

        SvrModel om;
        om.train_features = inst.data.features;
        om.kernel = inst.kernel;
        om.dual_coeffs = oracle.dual_coeffs;
        om.bias = oracle_bias(inst, oracle.dual_coeffs);
        om.c = inst.c;
        om.epsilon = inst.epsilon;
        for (int p = 0; p < 16; ++p) {
            std::vector<double> x(kFeatureCount);
            for (auto& v : x) v = probe_rng.uniform(-1.2, 1.2);
            worst_pred = std::max(worst_pred,
                                  std::abs(svr_predict(smo, x) - svr_predict(om, x)));
        }
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail = "max objective gap " + fmt(worst_obj) + ", max prediction gap " + fmt(worst_pred) +
             ", " + fmt(secs) + "s";
    return worst_obj <= 1e-6 && worst_pred <= 1e-4 && secs < 30.0;
}

bool svr_kkt_suite(std::string& detail) {
    std::size_t checked = 0;
    for (const auto& inst : svr_instances()) {
        SvrModel model = svr_fit(inst.data, inst.kernel, inst.c, inst.epsilon); // default tol
        double lo = *std::min_element(inst.data.labels.begin(), inst.data.labels.end());
        double hi = *std::max_element(inst.data.labels.begin(), inst.data.labels.end());
        const double tol = 1e-3 * (hi - lo);

        double sum = 0.0;
        for (double b : model.dual_coeffs) {
            if (b < -inst.c - 1e-12 || b > inst.c + 1e-12) {
                detail = "box violated";
                return false;
            }
            sum += b;
        }
        if (std::abs(sum) > 1e-8 * inst.c * static_cast<double>(inst.data.size())) {
            detail = "equality violated: " + fmt(sum);
            return false;
        }
        for (std::size_t i = 0; i < inst.data.size(); ++i) {
            double residual = inst.data.labels[i] -
                              svr_predict(model, inst.data.features.row(i));
            double b = model.dual_coeffs[i];
            if (std::abs(residual) < inst.epsilon - tol && b != 0.0) {
                detail = "inside-tube point with nonzero coefficient";
                return false;
            }
            if (std::abs(std::abs(b) - inst.c) <= 1e-12 * inst.c &&
                std::abs(residual) < inst.epsilon - tol) {
                detail = "bounded coefficient strictly inside the tube";
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " point checks over 50 models";
    return true;
}

// ---- criterion 6: GRNN limit laws --------------------------------------------

bool grnn_limits(std::string& detail) {
    Dataset train = testing::make_smooth_dataset(31, 60);
    double mean = vector_mean(train.labels);
    double lo = *std::min_element(train.labels.begin(), train.labels.end());
    double hi = *std::max_element(train.labels.begin(), train.labels.end());

    GrnnModel wide = grnn_fit(train, 1e6);
    GrnnModel sharp = grnn_fit(train, 1e-8);
    Rng rng(77);
    double worst_mean_gap = 0.0;
    bool nearest_ok = true, range_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(kFeatureCount);
        for (auto& v : x) v = rng.uniform(-1.0, 4.0);

        double w = grnn_predict(wide, x);
        worst_mean_gap = std::max(worst_mean_gap, std::abs(w - mean) / std::abs(mean));

        std::size_t nearest = 0;
        double best = squared_distance(x, train.features.row(0));
        for (std::size_t i = 1; i < train.size(); ++i) {
            double d = squared_distance(x, train.features.row(i));
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        if (grnn_predict(sharp, x) != train.labels[nearest]) nearest_ok = false;

        for (double sigma : {0.05, 0.7, 20.0}) {
            GrnnModel m = grnn_fit(train, sigma);
            double y = grnn_predict(m, x);
            if (y < lo - 1e-12 || y > hi + 1e-12) range_ok = false;
        }
    }
    detail = "mean gap " + fmt(worst_mean_gap) + ", nearest " + (nearest_ok ? "exact" : "BROKEN") +
             ", range " + (range_ok ? "held" : "BROKEN");
    return worst_mean_gap <= 1e-6 && nearest_ok && range_ok;
}

// ---- criterion 7: GRNN consistency -------------------------------------------

bool grnn_consistency(std::string& detail) {
    auto run_rmse = [](std::uint64_t seed, std::size_t n) {
        Dataset train = testing::make_smooth_dataset(seed, n);
        Dataset val = testing::make_smooth_dataset(seed + 5000, 200);
        double mean_dist = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < train.size(); ++i)
            for (std::size_t j = i + 1; j < train.size(); ++j) {
                mean_dist +=
                    std::sqrt(squared_distance(train.features.row(i), train.features.row(j)));
                ++pairs;
            }
        mean_dist /= static_cast<double>(pairs);
        GrnnModel model = grnn_fit(train, 0.5 * mean_dist);
        std::vector<double> pred(val.size());
        for (std::size_t i = 0; i < val.size(); ++i)
            pred[i] = grnn_predict(model, val.features.row(i));
        return rmse(PredictionPairs(val.labels, pred));
    };
    double small = 0.0, large = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        small += run_rmse(seed, 25);
        large += run_rmse(seed, 400);
    }
    small /= 10.0;
    large /= 10.0;
    detail = "mean rmse N=25: " + fmt(small) + ", N=400: " + fmt(large);
    return large < small;
}

// ---- criterion 8: kernel-ELM interpolation ------------------------------------

bool elm_interpolation(std::string& detail) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::size_t n = 10 + (seed * 7) % 91; // 10..100
        Dataset train = testing::make_separated_dataset(seed, n, 0.0, 3.0, 0.3);
        ElmModel model = elm_fit(train, KernelSpec::rbf(0.5), 1e12);
        double scale = 0.0;
        for (double y : train.labels) scale = std::max(scale, std::abs(y));
        for (std::size_t i = 0; i < train.size(); ++i) {
            double r = std::abs(elm_predict(model, train.features.row(i)) - train.labels[i]);
            worst = std::max(worst, r / scale);
        }
    }
    detail = "max relative training residual " + fmt(worst);
    return worst <= 1e-6;
}

// ---- criterion 9: transfer trend on the synthetic corpus ----------------------

bool transfer_trend(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    CountryData corpus = testing::make_shifted_corpus(2024);
    if (testing::min_marginal_gap(corpus) < 1.0) {
        detail = "corpus premise broken";
        return false;
    }

    std::vector<RegressorSpec> regressors;
    for (Method m : {Method::Grnn, Method::Elm, Method::Svr}) {
        RegressorSpec spec;
        spec.method = m;
        regressors.push_back(spec);
    }
    TransferConfig defaults;
    defaults.seed = 42;

    TdSweepTable table =
        td_sweep(corpus, regressors, {Fraction(0, 1), Fraction(1, 2)}, defaults, 4);
    bool ok = true;
    std::string parts;
    for (std::size_t r = 0; r < table.methods.size(); ++r) {
        double base = table.cells[r][0].mean_rmse;
        double mixed = table.cells[r][1].mean_rmse;
        double imp = improvement_pct(base, mixed);
        parts += method_name(table.methods[r]) + " " + fmt(base) + "->" + fmt(mixed) + " (" +
                 fmt(imp) + "%) ";
        ok = ok && mixed < base && imp > 0.0;
        ok = ok && table.cells[r][0].failure_count == 0 && table.cells[r][1].failure_count == 0;
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail = parts + fmt(secs) + "s";
    return ok && secs < 120.0;
}

// ---- criterion 10: byte-identical report trees --------------------------------

testing::CommandResult run_matrix_into(const fs::path& ws, const std::string& run_id,
                                       unsigned jobs = 4) {
    std::string base = kCli + " --config " + (kSourceDir / "data" / "datl.json").string() +
                       " --bundle " + (ws / "bundle.json").string() + " --out " +
                       (ws / "reports").string();
    auto ingest_res = testing::run_command(base + " ingest");
    if (ingest_res.exit_code != 0) return ingest_res;
    return testing::run_command(base + " --jobs " + std::to_string(jobs) + " --run-id " + run_id +
                                " run-matrix");
}

bool determinism_gate(std::string& detail) {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    unsetenv("DATL_SEED");
    fs::path ws_a = testing::make_temp_dir("det-a");
    fs::path ws_b = testing::make_temp_dir("det-b");
    // Different worker counts must not change a single output byte.
    auto res_a = run_matrix_into(ws_a, "gate", 4);
    auto res_b = run_matrix_into(ws_b, "gate", 1);
    if (res_a.exit_code != 0 || res_b.exit_code != 0) {
        detail = "matrix run failed";
        return false;
    }
    auto tree_a = testing::snapshot_tree(ws_a / "reports" / "gate");
    auto tree_b = testing::snapshot_tree(ws_b / "reports" / "gate");
    if (tree_a != tree_b) {
        detail = "trees differ";
        return false;
    }
    detail = std::to_string(tree_a.size()) + " files byte-identical";
    return true;
}

// ---- criterion 11: selection rule + split windows ------------------------------

CountrySeries fixture_series(std::uint64_t seed,
                             const std::vector<std::pair<int, int>>& gaps) {
    CountrySeries s;
    s.country_code = "TGT";
    Rng rng(seed);
    for (int year = 1960; year <= 2013; ++year) {
        double tau = static_cast<double>(year - 1960) / 53.0;
        std::array<double, kFeatureCount> f{};
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            f[c] = 2.0 * tau + 0.5 * static_cast<double>(c) + 0.05 * rng.normal();
        s.years.push_back(year);
        for (std::size_t c = 0; c < kFeatureCount; ++c) s.channels[c].push_back(f[c]);
        bool gap = false;
        for (auto [a, b] : gaps) gap |= (year >= a && year <= b);
        if (gap)
            s.channels[4].push_back(std::nullopt);
        else
            s.channels[4].push_back(testing::smooth_target(f));
    }
    return s;
}

bool selection_rule(std::string& detail) {
    CountryData sources = testing::make_shifted_corpus(99);
    std::vector<RegressorSpec> regressors;
    for (Method m : {Method::Grnn, Method::Elm}) {
        RegressorSpec spec;
        spec.method = m;
        regressors.push_back(spec);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto series = fixture_series(seed, {{1985, 1994}});
        auto report = estimate_missing(series, sources, regressors, seed);
        double min_rmse = report.candidates.front().metrics.rmse;
        for (const auto& c : report.candidates) min_rmse = std::min(min_rmse, c.metrics.rmse);
        if (!report.selected || report.selected->metrics.rmse != min_rmse) {
            detail = "seed " + std::to_string(seed) + ": selected is not the minimum";
            return false;
        }
    }

    // Split missing windows handled in a single run, on the bundled corpus.
    RunConfig cfg = load_config(kSourceDir / "data" / "datl.json", kSourceDir / "data");
    DatasetBundle bundle = ingest(cfg);
    CountryData candidates;
    for (const auto& code : cfg.candidate_sources)
        candidates.emplace_back(code, to_training_dataset(bundle.series.at(code)));
    auto iraq = estimate_missing(bundle.series.at("IRQ"), candidates, regressors, 42);
    bool first = false, second = false;
    for (const auto& [year, _] : iraq.estimates) {
        first |= (year >= 1965 && year <= 1967);
        second |= (year >= 1991 && year <= 2003);
    }
    if (iraq.missing_windows.size() != 2 || !first || !second) {
        detail = "split windows not covered";
        return false;
    }
    detail = "10 fixtures optimal; split windows estimated: " +
             std::to_string(iraq.estimates.size()) + " years";
    return true;
}

// ---- criterion 12: documented reproduction attempt ----------------------------

bool reproduction_attempt(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    unsetenv("DATL_SEED");
    fs::path ws = testing::make_temp_dir("repro");
    auto res = run_matrix_into(ws, "attempt");
    if (res.exit_code != 0) {
        detail = "matrix run failed with exit " + std::to_string(res.exit_code);
        return false;
    }
    json doc = json::parse(testing::read_file(ws / "reports" / "attempt" / "report.json"));
    if (!doc.contains("notes") || !doc.at("notes").contains("grnn_highest_r2")) {
        detail = "tally missing from the run manifest notes";
        return false;
    }
    const json& tally = doc.at("notes").at("grnn_highest_r2");
    std::size_t count = tally.at("count").get<std::size_t>();
    std::size_t pairs = tally.at("pairs").get<std::size_t>();

    // Recompute the tally from the experiments to confirm it was recorded
    // faithfully.
    std::map<std::string, std::pair<double, std::string>> best;
    for (const auto& e : doc.at("experiments")) {
        std::string key = e.at("source").get<std::string>() + "-to-" +
                          e.at("target").get<std::string>();
        double r2 = e.at("metrics").at("r2").get<double>();
        auto it = best.find(key);
        if (it == best.end() || r2 > it->second.first)
            best[key] = {r2, e.at("regressor").get<std::string>()};
    }
    std::size_t recount = 0;
    for (const auto& [k, v] : best)
        if (v.second == "grnn") ++recount;

    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool recorded_ok = pairs == 12 && count == recount && doc.at("experiments").size() == 36;
    detail = "recorded grnn best-R2 in " + std::to_string(count) + "/" + std::to_string(pairs) +
             " (reference 10/12, target >=8: " + (count >= 8 ? "met" : "not met") +
             "; informational), " + fmt(secs) + "s";
    return recorded_ok && secs < 300.0;
}

} // namespace

int main() {
    Harness h;
    h.run(1, "exact rmse/rrmse worked examples", exact_metrics);
    h.run(2, "mixed-domain cardinalities on a 54-row target", mixed_cardinalities);
    h.run(3, "documented missing-GDP windows in the bundled corpus", missing_windows_match);
    h.run(4, "SMO matches the dense QP oracle (50 instances)", svr_oracle_equivalence);
    h.run(5, "SVR KKT suite on converged models", svr_kkt_suite);
    h.run(6, "GRNN limit laws and range bound", grnn_limits);
    h.run(7, "GRNN consistency: more data, lower validation error", grnn_consistency);
    h.run(8, "kernel-ELM interpolation at C=1e12", elm_interpolation);
    h.run(9, "transfer trend: f=1/2 beats f=0 for every regressor", transfer_trend);
    h.run(10, "determinism gate: byte-identical report trees", determinism_gate);
    h.run(11, "missing-value selection rule and split windows", selection_rule);
    h.run(12, "reproduction attempt recorded in the run manifest", reproduction_attempt);

    if (h.failures > 0) {
        std::printf("%d criterion(s) failed\n", h.failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

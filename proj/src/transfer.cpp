#include "datl/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "datl/errors.hpp"
#include "datl/metrics.hpp"
#include "datl/rng.hpp"

namespace datl {

std::string mixing_policy_name(MixingPolicy p) {
    return p == MixingPolicy::EarliestYears ? "earliest_years" : "seeded_random";
}

MixingPolicy mixing_policy_from_name(const std::string& name) {
    if (name == "earliest_years") return MixingPolicy::EarliestYears;
    if (name == "seeded_random") return MixingPolicy::SeededRandom;
    throw ConfigError("unknown mixing policy '" + name + "'");
}

std::string validation_split_name(ValidationSplit v) {
    return v == ValidationSplit::SeededRandom ? "seeded_random" : "chronological_last_third";
}

ValidationSplit validation_split_from_name(const std::string& name) {
    if (name == "seeded_random") return ValidationSplit::SeededRandom;
    if (name == "chronological_last_third") return ValidationSplit::ChronologicalLastThird;
    throw ConfigError("unknown validation split '" + name + "'");
}

namespace {

Dataset select_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.years.reserve(rows.size());
    out.features = Matrix(rows.size(), kFeatureCount);
    out.labels.reserve(rows.size());
    out.origin_tags.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t i = rows[r];
        out.years.push_back(d.years[i]);
        for (std::size_t c = 0; c < kFeatureCount; ++c) out.features(r, c) = d.features(i, c);
        out.labels.push_back(d.labels[i]);
        out.origin_tags.push_back(d.origin_tags[i]);
    }
    return out;
}

Dataset concat(const Dataset& a, const Dataset& b) {
    Dataset out;
    const std::size_t n = a.size() + b.size();
    out.years.reserve(n);
    out.features = Matrix(n, kFeatureCount);
    out.labels.reserve(n);
    out.origin_tags.reserve(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.years.push_back(a.years[i]);
        for (std::size_t c = 0; c < kFeatureCount; ++c) out.features(i, c) = a.features(i, c);
        out.labels.push_back(a.labels[i]);
        out.origin_tags.push_back(a.origin_tags[i]);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::size_t r = a.size() + i;
        out.years.push_back(b.years[i]);
        for (std::size_t c = 0; c < kFeatureCount; ++c) out.features(r, c) = b.features(i, c);
        out.labels.push_back(b.labels[i]);
        out.origin_tags.push_back(b.origin_tags[i]);
    }
    return out;
}

// Chronological split: last `n_val` rows by year become validation. With a
// single row, train and validation coincide.
void split_for_search(const Dataset& d, Dataset& train, Dataset& validation) {
    const std::size_t n = d.size();
    if (n < 2) {
        train = d;
        validation = d;
        return;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d.years[a] < d.years[b]; });
    std::size_t n_val = std::max<std::size_t>(1, n / 3);
    if (n_val >= n) n_val = n - 1;
    std::vector<std::size_t> train_rows(order.begin(), order.end() - n_val);
    std::vector<std::size_t> val_rows(order.end() - n_val, order.end());
    train = select_rows(d, train_rows);
    validation = select_rows(d, val_rows);
}

EvalMetrics compute_metrics(const std::vector<double>& actual,
                            const std::vector<double>& predicted) {
    PredictionPairs pairs(actual, predicted);
    return EvalMetrics{rmse(pairs), r_squared(pairs), rrmse(pairs)};
}

struct CoreResult {
    TrainedModel model;
    Standardizer standardizer;
    Hyperparameters chosen;
};

// Shared training path: standardize on the mixed domain, grid-search on its
// chronologically last third, refit the winner on all of it.
CoreResult train_on_mixed(const Dataset& mixed, const RegressorSpec& regressor) {
    Standardizer std_ = Standardizer::fit(mixed);
    Dataset mixed_std = std_.apply(mixed);
    Dataset search_train, search_val;
    split_for_search(mixed_std, search_train, search_val);
    GridSearchResult search = grid_search(regressor, search_train, search_val);
    TrainedModel final_model = fit_with(regressor, mixed_std, search.chosen);
    return CoreResult{std::move(final_model), std_, search.chosen};
}

std::vector<double> predict_all(const TrainedModel& model, const Dataset& d) {
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = model.predict(d.features.row(i));
    return out;
}

// Rethrows a library error with the experiment identity prefixed, keeping the
// concrete type for the common cases so exit-code mapping stays intact.
[[noreturn]] void rethrow_tagged(const Error& e, const TransferConfig& cfg) {
    std::string msg = cfg.source_code + "-to-" + cfg.target_code + " " +
                      method_name(cfg.regressor.method) + " f=" + cfg.td_fraction.str() + ": " +
                      e.what();
    if (auto* c = dynamic_cast<const ConvergenceFailureError*>(&e))
        throw ConvergenceFailureError(msg, c->residual_violation);
    if (dynamic_cast<const NumericFailureError*>(&e)) throw NumericFailureError(msg);
    if (dynamic_cast<const AllCandidatesFailedError*>(&e)) throw AllCandidatesFailedError(msg);
    if (dynamic_cast<const EmptyDatasetError*>(&e)) throw EmptyDatasetError(msg);
    if (dynamic_cast<const InfeasibleFractionError*>(&e)) throw InfeasibleFractionError(msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    throw Error(msg);
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    unsigned workers = std::min<std::size_t>(jobs, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace

MixedDomain construct_mixed_domain(const Dataset& source, const Dataset& target,
                                   const TransferConfig& cfg) {
    if (source.size() == 0) throw EmptyDatasetError("construct_mixed_domain: empty source");
    const std::int64_t target_n = static_cast<std::int64_t>(target.size());
    const std::int64_t k = cfg.td_fraction.rounded_times(target_n);
    if (target_n == 0 && cfg.td_fraction.num != 0)
        throw EmptyDatasetError("construct_mixed_domain: empty target with nonzero fraction");
    if (k > target_n)
        throw InfeasibleFractionError("td fraction " + cfg.td_fraction.str() + " asks for " +
                                      std::to_string(k) + " rows but target has " +
                                      std::to_string(target_n));

    std::vector<std::size_t> picked;
    if (cfg.mixing_policy == MixingPolicy::EarliestYears) {
        picked.resize(static_cast<std::size_t>(k));
        std::iota(picked.begin(), picked.end(), 0); // target rows are year-sorted
    } else {
        Rng rng(cfg.seed);
        picked = rng.sample_without_replacement(static_cast<std::size_t>(target_n),
                                                static_cast<std::size_t>(k));
        std::sort(picked.begin(), picked.end());
    }

    MixedDomain mixed;
    Dataset target_part = select_rows(target, picked);
    mixed.mixed_target_years = target_part.years;
    mixed.data = concat(source, target_part);
    return mixed;
}

EvalReport datl_run(const Dataset& source, const Dataset& target, const TransferConfig& cfg) {
    try {
        MixedDomain mixed = construct_mixed_domain(source, target, cfg);
        CoreResult core = train_on_mixed(mixed.data, cfg.regressor);

        Dataset target_std = core.standardizer.apply(target);
        std::vector<double> predicted = predict_all(core.model, target_std);
        if (target.size() == 0)
            throw EmptyDatasetError("datl_run: nothing to predict (empty target)");

        EvalReport report;
        report.source_code = cfg.source_code;
        report.target_code = cfg.target_code;
        report.method = cfg.regressor.method;
        report.td_fraction = cfg.td_fraction;
        report.mixing_policy = cfg.mixing_policy;
        report.seed = cfg.seed;
        report.chosen = core.chosen;
        report.mixed_target_years = mixed.mixed_target_years;
        report.full = compute_metrics(target.labels, predicted);
        report.per_year.reserve(target.size());
        for (std::size_t i = 0; i < target.size(); ++i)
            report.per_year.push_back({target.years[i], target.labels[i], predicted[i]});

        // Extra view: rows that were not mixed into training.
        std::vector<double> held_actual, held_pred;
        for (std::size_t i = 0; i < target.size(); ++i) {
            if (std::binary_search(mixed.mixed_target_years.begin(),
                                   mixed.mixed_target_years.end(), target.years[i]))
                continue;
            held_actual.push_back(target.labels[i]);
            held_pred.push_back(predicted[i]);
        }
        if (held_actual.size() >= 2) {
            try {
                report.heldout = compute_metrics(held_actual, held_pred);
            } catch (const DomainError&) {
                // constant actuals or zero mean; leave the extra view absent
            }
        }
        return report;
    } catch (const Error& e) {
        rethrow_tagged(e, cfg);
    }
}

std::vector<PairOutcome> pairwise_matrix(const CountryData& countries,
                                         const std::vector<RegressorSpec>& regressors,
                                         const TransferConfig& defaults, unsigned jobs) {
    if (countries.size() < 2)
        throw ConfigError("pairwise matrix needs at least 2 countries, got " +
                          std::to_string(countries.size()));
    for (std::size_t i = 0; i < countries.size(); ++i)
        for (std::size_t j = i + 1; j < countries.size(); ++j)
            if (countries[i].first == countries[j].first)
                throw ConfigError("duplicate country '" + countries[i].first +
                                  "' in pairwise matrix");
    if (regressors.empty()) throw ConfigError("pairwise matrix needs at least one regressor");

    struct Job {
        std::size_t src, tgt, reg;
    };
    std::vector<Job> jobs_list;
    for (std::size_t s = 0; s < countries.size(); ++s)
        for (std::size_t t = 0; t < countries.size(); ++t) {
            if (s == t) continue;
            for (std::size_t r = 0; r < regressors.size(); ++r) jobs_list.push_back({s, t, r});
        }

    std::vector<PairOutcome> outcomes(jobs_list.size());
    parallel_for(jobs_list.size(), jobs, [&](std::size_t idx) {
        const Job& job = jobs_list[idx];
        TransferConfig cfg = defaults;
        cfg.source_code = countries[job.src].first;
        cfg.target_code = countries[job.tgt].first;
        cfg.regressor = regressors[job.reg];
        PairOutcome& out = outcomes[idx];
        out.source_code = cfg.source_code;
        out.target_code = cfg.target_code;
        out.method = cfg.regressor.method;
        try {
            out.report = datl_run(countries[job.src].second, countries[job.tgt].second, cfg);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    });
    return outcomes;
}

std::vector<Fraction> default_sweep_fractions() {
    return {Fraction(0, 1), Fraction(1, 18), Fraction(1, 9),
            Fraction(1, 6), Fraction(1, 3),  Fraction(1, 2)};
}

TdSweepTable td_sweep(const CountryData& countries, const std::vector<RegressorSpec>& regressors,
                      const std::vector<Fraction>& fractions, const TransferConfig& defaults,
                      unsigned jobs) {
    TdSweepTable table;
    for (const auto& spec : regressors) table.methods.push_back(spec.method);
    table.fractions = fractions.empty() ? default_sweep_fractions() : fractions;
    table.cells.assign(regressors.size(), std::vector<TdSweepCell>(table.fractions.size()));

    for (std::size_t f = 0; f < table.fractions.size(); ++f) {
        TransferConfig cfg = defaults;
        cfg.td_fraction = table.fractions[f];
        auto outcomes = pairwise_matrix(countries, regressors, cfg, jobs);
        for (const auto& out : outcomes) {
            std::size_t r = 0;
            while (r < regressors.size() && regressors[r].method != out.method) ++r;
            TdSweepCell& cell = table.cells[r][f];
            if (out.report) {
                cell.mean_rmse += out.report->full.rmse;
                cell.pair_rmses.emplace_back(out.source_code + "-to-" + out.target_code,
                                             out.report->full.rmse);
                ++cell.run_count;
            } else {
                ++cell.failure_count;
            }
        }
    }
    for (auto& row : table.cells)
        for (auto& cell : row)
            if (cell.run_count > 0) cell.mean_rmse /= static_cast<double>(cell.run_count);

    // Improvement percentages against the no-transfer column, when swept.
    std::size_t zero_col = table.fractions.size();
    for (std::size_t f = 0; f < table.fractions.size(); ++f)
        if (table.fractions[f].num == 0) zero_col = f;
    if (zero_col < table.fractions.size()) {
        std::vector<std::vector<double>> imp(regressors.size(),
                                             std::vector<double>(table.fractions.size(), 0.0));
        for (std::size_t r = 0; r < regressors.size(); ++r) {
            double base = table.cells[r][zero_col].mean_rmse;
            for (std::size_t f = 0; f < table.fractions.size(); ++f)
                imp[r][f] = improvement_pct(base, table.cells[r][f].mean_rmse);
        }
        table.improvements = std::move(imp);
    }
    return table;
}

MissingEstimateReport estimate_missing(const CountrySeries& country,
                                       const CountryData& candidate_sources,
                                       const std::vector<RegressorSpec>& regressors,
                                       std::uint64_t seed, ValidationSplit split, unsigned jobs) {
    MissingEstimateReport report;
    report.country_code = country.country_code;
    report.missing_windows = missing_gdp_windows(country);

    // Missing years we can actually predict: GDP absent, inputs present.
    std::vector<int> predictable;
    const auto& gdp = country.channel(Channel::GdpPerCapita);
    for (std::size_t i = 0; i < country.size(); ++i)
        if (!gdp[i].has_value() && country.inputs_complete_at(i))
            predictable.push_back(country.years[i]);

    if (predictable.empty()) {
        report.nothing_to_do = true;
        return report;
    }

    Dataset complete = to_training_dataset(country);
    if (complete.size() < 6)
        throw EmptyDatasetError("estimate_missing: " + country.country_code + " has only " +
                                std::to_string(complete.size()) +
                                " complete years; need at least 6 for a validation third");
    if (candidate_sources.empty())
        throw ConfigError("estimate_missing: no candidate sources");
    if (regressors.empty()) throw ConfigError("estimate_missing: no regressors");

    // One third of the complete years is held out for scoring candidates.
    const std::size_t n = complete.size();
    const std::size_t n_val = std::max<std::size_t>(1, n / 3);
    std::vector<std::size_t> val_rows;
    if (split == ValidationSplit::SeededRandom) {
        Rng rng(seed);
        val_rows = rng.sample_without_replacement(n, n_val);
        std::sort(val_rows.begin(), val_rows.end());
    } else {
        for (std::size_t i = n - n_val; i < n; ++i) val_rows.push_back(i);
    }
    std::vector<std::size_t> rest_rows;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(val_rows.begin(), val_rows.end(), i)) rest_rows.push_back(i);

    Dataset validation = select_rows(complete, val_rows);
    Dataset remainder = select_rows(complete, rest_rows);
    report.validation_years = validation.years;

    // Candidates run regressor-major with sources in code order, which is
    // also the documented tie-break order.
    CountryData sources = candidate_sources;
    std::sort(sources.begin(), sources.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    struct Candidate {
        std::size_t reg, src;
    };
    std::vector<Candidate> cands;
    for (std::size_t r = 0; r < regressors.size(); ++r)
        for (std::size_t s = 0; s < sources.size(); ++s) cands.push_back({r, s});

    struct CandidateResult {
        std::optional<CandidateRow> row;
        std::optional<CoreResult> core;
        std::string error;
    };
    std::vector<CandidateResult> results(cands.size());

    parallel_for(cands.size(), jobs, [&](std::size_t idx) {
        const auto& cand = cands[idx];
        CandidateResult& res = results[idx];
        try {
            Dataset mixed = concat(sources[cand.src].second, remainder);
            CoreResult core = train_on_mixed(mixed, regressors[cand.reg]);
            Dataset val_std = core.standardizer.apply(validation);
            std::vector<double> predicted = predict_all(core.model, val_std);
            EvalMetrics metrics = compute_metrics(validation.labels, predicted);
            res.row = CandidateRow{regressors[cand.reg].method, sources[cand.src].first, metrics};
            res.core = std::move(core);
        } catch (const std::exception& e) {
            res.error = sources[cand.src].first + "/" + method_name(regressors[cand.reg].method) +
                        ": " + e.what();
        }
    });

    std::size_t best = cands.size();
    std::vector<std::string> failures;
    for (std::size_t idx = 0; idx < cands.size(); ++idx) {
        if (!results[idx].row) {
            failures.push_back(results[idx].error);
            continue;
        }
        report.candidates.push_back(*results[idx].row);
        if (best == cands.size() || results[idx].row->metrics.rmse < results[best].row->metrics.rmse)
            best = idx;
    }
    if (best == cands.size()) {
        std::string msg = "estimate_missing: every candidate failed for " + country.country_code;
        for (const auto& f : failures) msg += "\n  " + f;
        throw AllCandidatesFailedError(msg);
    }
    report.selected = *results[best].row;

    // The winning model estimates GDP for the predictable missing years.
    Dataset to_predict = to_prediction_dataset(country, predictable);
    Dataset to_predict_std = results[best].core->standardizer.apply(to_predict);
    for (std::size_t i = 0; i < to_predict_std.size(); ++i)
        report.estimates.emplace_back(to_predict_std.years[i],
                                      results[best].core->model.predict(to_predict_std.features.row(i)));
    return report;
}

} // namespace datl

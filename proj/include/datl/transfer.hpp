#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "datl/dataset.hpp"
#include "datl/fraction.hpp"
#include "datl/regressor.hpp"

namespace datl {

enum class MixingPolicy { EarliestYears, SeededRandom };
enum class ValidationSplit { SeededRandom, ChronologicalLastThird };

std::string mixing_policy_name(MixingPolicy p);
MixingPolicy mixing_policy_from_name(const std::string& name);
std::string validation_split_name(ValidationSplit v);
ValidationSplit validation_split_from_name(const std::string& name);

// One source->target experiment: which countries, how much target data is
// mixed into training, how the mixed rows are picked, and with which
// regressor.
struct TransferConfig {
    std::string source_code;
    std::string target_code;
    Fraction td_fraction{1, 3};
    MixingPolicy mixing_policy = MixingPolicy::EarliestYears;
    std::uint64_t seed = 42;
    RegressorSpec regressor;
};

// Training set of a transfer run: every source row plus k target rows,
// k = round(td_fraction * target rows).
struct MixedDomain {
    Dataset data;
    std::vector<int> mixed_target_years; // sorted ascending
};

MixedDomain construct_mixed_domain(const Dataset& source, const Dataset& target,
                                   const TransferConfig& cfg);

struct EvalMetrics {
    double rmse = 0.0;
    double r2 = 0.0;
    double rrmse = 0.0;
    bool operator==(const EvalMetrics&) const = default;
};

struct YearPrediction {
    int year = 0;
    double actual = 0.0;
    double predicted = 0.0;
    bool operator==(const YearPrediction&) const = default;
};

struct EvalReport {
    std::string source_code;
    std::string target_code;
    Method method = Method::Grnn;
    Fraction td_fraction;
    MixingPolicy mixing_policy = MixingPolicy::EarliestYears;
    std::uint64_t seed = 42;
    Hyperparameters chosen;
    EvalMetrics full; // over every target row
    // Over target rows not mixed into training; absent when fewer than two
    // such rows remain or their actuals are constant.
    std::optional<EvalMetrics> heldout;
    std::vector<int> mixed_target_years;
    std::vector<YearPrediction> per_year;

    bool operator==(const EvalReport&) const = default;
};

// Full transfer pipeline for one experiment: build the mixed domain,
// standardize on it, pick hyperparameters on its chronologically last third,
// refit on all of it, predict every target row, and score against the target
// labels. Deterministic given the seed.
EvalReport datl_run(const Dataset& source, const Dataset& target, const TransferConfig& cfg);

using CountryData = std::vector<std::pair<std::string, Dataset>>;

struct PairOutcome {
    std::string source_code;
    std::string target_code;
    Method method = Method::Grnn;
    std::optional<EvalReport> report;
    std::string error; // set when the run failed
};

// All ordered country pairs x all regressors. Failures are recorded in place;
// the remaining runs continue.
std::vector<PairOutcome> pairwise_matrix(const CountryData& countries,
                                         const std::vector<RegressorSpec>& regressors,
                                         const TransferConfig& defaults, unsigned jobs = 1);

struct TdSweepCell {
    double mean_rmse = 0.0;
    std::size_t run_count = 0;
    std::size_t failure_count = 0;
    std::vector<std::pair<std::string, double>> pair_rmses; // "SRC-to-TGT" -> rmse
    bool operator==(const TdSweepCell&) const = default;
};

struct TdSweepTable {
    std::vector<Method> methods;
    std::vector<Fraction> fractions;
    std::vector<std::vector<TdSweepCell>> cells; // [method][fraction]
    // improvement_pct against the fraction-0 column; present iff 0 is swept.
    std::optional<std::vector<std::vector<double>>> improvements;

    bool operator==(const TdSweepTable&) const = default;
};

std::vector<Fraction> default_sweep_fractions();

// Mean RMSE per (regressor, fraction) over all ordered country pairs.
TdSweepTable td_sweep(const CountryData& countries, const std::vector<RegressorSpec>& regressors,
                      const std::vector<Fraction>& fractions, const TransferConfig& defaults,
                      unsigned jobs = 1);

struct CandidateRow {
    Method method = Method::Grnn;
    std::string source_code;
    EvalMetrics metrics;
    bool operator==(const CandidateRow&) const = default;
};

struct MissingEstimateReport {
    std::string country_code;
    bool nothing_to_do = false;
    std::vector<std::pair<int, int>> missing_windows; // inclusive year ranges
    std::vector<int> validation_years;
    std::vector<CandidateRow> candidates;
    std::optional<CandidateRow> selected;
    std::vector<std::pair<int, double>> estimates; // (year, predicted GDP)

    bool operator==(const MissingEstimateReport&) const = default;
};

// Missing-GDP estimation: hold out a third of the country's complete years,
// score every (source, regressor) candidate trained on source + the remaining
// complete years, pick the lowest validation RMSE (ties: regressor order,
// then source code), and predict GDP for every missing year whose inputs are
// complete with the winning model.
MissingEstimateReport estimate_missing(const CountrySeries& country,
                                       const CountryData& candidate_sources,
                                       const std::vector<RegressorSpec>& regressors,
                                       std::uint64_t seed,
                                       ValidationSplit split = ValidationSplit::SeededRandom,
                                       unsigned jobs = 1);

} // namespace datl

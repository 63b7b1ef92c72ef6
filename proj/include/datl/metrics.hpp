#pragma once

#include <vector>

namespace datl {

struct PredictionPairs {
    std::vector<double> actual;
    std::vector<double> predicted;

    PredictionPairs(std::vector<double> actual_in, std::vector<double> predicted_in);
    std::size_t size() const { return actual.size(); }
};

// sqrt(mean((predicted - actual)^2))
double rmse(const PredictionPairs& p);

// 1 - sum((predicted - actual)^2) / sum((actual - mean(actual))^2)
// Requires N >= 2 and non-constant actuals.
double r_squared(const PredictionPairs& p);

// rmse / mean(actual). Requires mean(actual) != 0.
double rrmse(const PredictionPairs& p);

// 100 * (baseline - new) / baseline. Requires baseline > 0.
double improvement_pct(double baseline_rmse, double new_rmse);

} // namespace datl

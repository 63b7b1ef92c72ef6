#include "datl/metrics.hpp"

#include <cmath>
#include <utility>

#include "datl/errors.hpp"
#include "datl/linalg.hpp"

namespace datl {

PredictionPairs::PredictionPairs(std::vector<double> actual_in, std::vector<double> predicted_in)
    : actual(std::move(actual_in)), predicted(std::move(predicted_in)) {
    if (actual.size() != predicted.size())
        throw DomainError("prediction pairs: length mismatch (" + std::to_string(actual.size()) +
                          " vs " + std::to_string(predicted.size()) + ")");
    if (actual.empty()) throw DomainError("prediction pairs: empty");
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i]))
            throw DomainError("prediction pairs: non-finite value at index " + std::to_string(i));
    }
}

double rmse(const PredictionPairs& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = p.predicted[i] - p.actual[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(p.size()));
}

double r_squared(const PredictionPairs& p) {
    if (p.size() < 2) throw DomainError("r_squared: need at least 2 observations");
    double mean = vector_mean(p.actual);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double r = p.predicted[i] - p.actual[i];
        double t = p.actual[i] - mean;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (ss_tot == 0.0) throw DomainError("r_squared: actual values are constant");
    return 1.0 - ss_res / ss_tot;
}

double rrmse(const PredictionPairs& p) {
    double mean = vector_mean(p.actual);
    if (mean == 0.0) throw DomainError("rrmse: mean of actual values is zero");
    return rmse(p) / mean;
}

double improvement_pct(double baseline_rmse, double new_rmse) {
    if (!(baseline_rmse > 0.0)) throw DomainError("improvement_pct: baseline must be > 0");
    return 100.0 * (baseline_rmse - new_rmse) / baseline_rmse;
}

} // namespace datl

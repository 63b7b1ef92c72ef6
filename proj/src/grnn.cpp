#include "datl/grnn.hpp"

#include <cmath>
#include <limits>

#include "datl/errors.hpp"

namespace datl {

GrnnModel grnn_fit(const Dataset& train, double sigma) {
    if (train.size() == 0) throw EmptyDatasetError("grnn_fit: empty training set");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidHyperparameterError("grnn sigma must be > 0, got " + std::to_string(sigma));
    return GrnnModel{train.features, train.labels, sigma};
}

double grnn_predict(const GrnnModel& model, std::span<const double> x) {
    const std::size_t n = model.train_labels.size();
    std::vector<double> sq(n);
    double sq_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = squared_distance(x, model.train_features.row(i));
        if (sq[i] < sq_min) sq_min = sq[i];
    }

    // Weights are computed relative to the nearest point so the denominator
    // is at least 1; as sigma -> 0 only the nearest label(s) survive.
    const double inv = 1.0 / (2.0 * model.sigma * model.sigma);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = std::exp(-(sq[i] - sq_min) * inv);
        num += model.train_labels[i] * w;
        den += w;
    }
    return num / den;
}

} // namespace datl

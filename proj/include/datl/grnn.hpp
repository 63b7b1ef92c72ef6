#pragma once

#include <span>

#include "datl/dataset.hpp"
#include "datl/linalg.hpp"

namespace datl {

// Gaussian kernel smoother: prediction is the weight-normalized sum
// sum_i y_i * exp(-||x - x_i||^2 / (2 sigma^2)) / sum_i exp(...).
// Training is lazy; the model stores the training set verbatim.
struct GrnnModel {
    Matrix train_features;
    std::vector<double> train_labels;
    double sigma = 1.0;
};

GrnnModel grnn_fit(const Dataset& train, double sigma);

// The output is a convex combination of training labels. When sigma is small
// enough that every relative weight underflows, the nearest training label
// wins (ties average), matching the sigma -> 0 limit.
double grnn_predict(const GrnnModel& model, std::span<const double> x);

} // namespace datl

#pragma once

#include <cstdint>
#include <span>

#include "datl/dataset.hpp"
#include "datl/kernel.hpp"

namespace datl {

// Kernel variant: the hidden layer of a point is its kernel row against all
// training points, and the output weights solve (K + I/C) w = y.
struct ElmModel {
    Matrix train_features;
    KernelSpec kernel;
    std::vector<double> out_weights;
    double regularization = 1.0;
};

ElmModel elm_fit(const Dataset& train, const KernelSpec& kernel, double c);

// sum_j w_j * K(x_j, x)
double elm_predict(const ElmModel& model, std::span<const double> x);

// Reference variant with M random sigmoid hidden nodes. Kept behind the same
// train/predict shape for comparison runs; the experiment pipeline uses the
// kernel variant.
struct RandomElmModel {
    Matrix input_weights; // M x d
    std::vector<double> biases;
    std::vector<double> out_weights;
};

RandomElmModel random_elm_fit(const Dataset& train, std::size_t hidden_nodes, double c,
                              std::uint64_t seed);
RandomElmModel random_elm_fit(const Dataset& train, double c, std::uint64_t seed); // M = min(2N, 200)
double random_elm_predict(const RandomElmModel& model, std::span<const double> x);

} // namespace datl

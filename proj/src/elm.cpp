#include "datl/elm.hpp"

#include <cmath>

#include "datl/errors.hpp"
#include "datl/rng.hpp"

namespace datl {

ElmModel elm_fit(const Dataset& train, const KernelSpec& kernel, double c) {
    if (train.size() == 0) throw EmptyDatasetError("elm_fit: empty training set");
    if (!(c > 0.0)) throw InvalidHyperparameterError("elm C must be > 0, got " + std::to_string(c));

    const std::size_t n = train.size();
    Matrix k = kernel_matrix(kernel, train.features);
    for (std::size_t i = 0; i < n; ++i) k(i, i) += 1.0 / c;

    std::vector<double> w;
    try {
        w = cholesky_solve(k, train.labels);
    } catch (const NumericFailureError& e) {
        throw NumericFailureError(std::string("elm_fit: regularized kernel solve failed: ") +
                                  e.what());
    }
    return ElmModel{train.features, kernel, std::move(w), c};
}

double elm_predict(const ElmModel& model, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < model.out_weights.size(); ++j)
        s += model.out_weights[j] * model.kernel(model.train_features.row(j), x);
    return s;
}

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
} // namespace

RandomElmModel random_elm_fit(const Dataset& train, std::size_t hidden_nodes, double c,
                              std::uint64_t seed) {
    if (train.size() == 0) throw EmptyDatasetError("random_elm_fit: empty training set");
    if (!(c > 0.0)) throw InvalidHyperparameterError("elm C must be > 0");
    if (hidden_nodes == 0) throw InvalidHyperparameterError("elm needs at least 1 hidden node");

    const std::size_t n = train.size();
    const std::size_t d = train.features.cols();
    const std::size_t m = hidden_nodes;

    Rng rng(seed);
    RandomElmModel model;
    model.input_weights = Matrix(m, d);
    model.biases.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < d; ++j) model.input_weights(k, j) = rng.uniform(-1.0, 1.0);
        model.biases[k] = rng.uniform(-1.0, 1.0);
    }

    // H: n x m hidden activations.
    Matrix h(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
            h(i, k) = sigmoid(dot(model.input_weights.row(k), train.features.row(i)) +
                              model.biases[k]);

    // Ridge normal equations: (H^T H + I/C) w = H^T y.
    Matrix hth(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += h(i, a) * h(i, b);
            hth(a, b) = s;
            hth(b, a) = s;
        }
        hth(a, a) += 1.0 / c;
    }
    std::vector<double> hty(m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t i = 0; i < n; ++i) hty[a] += h(i, a) * train.labels[i];

    model.out_weights = cholesky_solve(hth, hty);
    return model;
}

RandomElmModel random_elm_fit(const Dataset& train, double c, std::uint64_t seed) {
    std::size_t m = std::min<std::size_t>(2 * train.size(), 200);
    return random_elm_fit(train, m, c, seed);
}

double random_elm_predict(const RandomElmModel& model, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < model.out_weights.size(); ++k)
        s += model.out_weights[k] *
             sigmoid(dot(model.input_weights.row(k), x) + model.biases[k]);
    return s;
}

} // namespace datl

#include <doctest.h>

#include <cmath>

#include "datl/elm.hpp"
#include "datl/errors.hpp"
#include "support/synthetic.hpp"

using namespace datl;

TEST_CASE("elm: zero labels give zero weights and zero predictions") {
    auto train = testing::make_separated_dataset(1, 15, 0.0, 3.0, 0.3);
    for (auto& y : train.labels) y = 0.0;
    auto model = elm_fit(train, KernelSpec::rbf(0.5), 10.0);
    for (double w : model.out_weights) CHECK(w == 0.0);
    std::vector<double> x{1.0, 2.0, 0.5, 1.5};
    CHECK(elm_predict(model, x) == 0.0);
}

TEST_CASE("elm: large C interpolates distinct training points") {
    auto train = testing::make_separated_dataset(2, 30, 0.0, 3.0, 0.3);
    auto model = elm_fit(train, KernelSpec::rbf(0.5), 1e12);
    double scale = 0.0;
    for (double y : train.labels) scale = std::max(scale, std::abs(y));
    for (std::size_t i = 0; i < train.size(); ++i) {
        double pred = elm_predict(model, train.features.row(i));
        CHECK(std::abs(pred - train.labels[i]) <= 1e-6 * scale);
    }
}

TEST_CASE("elm: single point with large C reproduces its label") {
    Dataset d;
    d.years = {1960};
    d.features = Matrix(1, kFeatureCount, 0.3);
    d.labels = {5.0};
    d.origin_tags = {"X"};
    auto model = elm_fit(d, KernelSpec::rbf(1.0), 1e12);
    CHECK(elm_predict(model, d.features.row(0)) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("elm: linear kernel prediction is a dot product against weights") {
    ElmModel model;
    model.train_features = Matrix(1, kFeatureCount, 0.0);
    model.train_features(0, 0) = 1.0;
    model.kernel = KernelSpec::linear();
    model.out_weights = {2.0};
    std::vector<double> x{3.0, 0.0, 0.0, 0.0};
    CHECK(elm_predict(model, x) == doctest::Approx(6.0));
}

TEST_CASE("elm: C must be positive, train non-empty") {
    auto train = testing::make_smooth_dataset(3, 5);
    CHECK_THROWS_AS(elm_fit(train, KernelSpec::rbf(1.0), 0.0), InvalidHyperparameterError);
    Dataset empty;
    CHECK_THROWS_AS(elm_fit(empty, KernelSpec::rbf(1.0), 1.0), EmptyDatasetError);
}

TEST_CASE("elm: duplicate rows with effectively no ridge fail the solve") {
    Dataset d;
    d.years = {1960, 1961};
    d.features = Matrix(2, kFeatureCount, 1.0); // identical rows
    d.labels = {1.0, 2.0};
    d.origin_tags = {"X", "X"};
    CHECK_THROWS_AS(elm_fit(d, KernelSpec::rbf(1.0), 1e18), NumericFailureError);
}

TEST_CASE("random elm: seeded fit is reproducible and learns the smooth target") {
    auto train = testing::make_smooth_dataset(21, 120);
    auto test = testing::make_smooth_dataset(22, 60);
    auto m1 = random_elm_fit(train, 100.0, 7);
    auto m2 = random_elm_fit(train, 100.0, 7);
    CHECK(m1.out_weights == m2.out_weights);
    CHECK(m1.input_weights.data() == m2.input_weights.data());

    double err = 0.0, base = 0.0;
    double mean = 0.0;
    for (double y : test.labels) mean += y;
    mean /= static_cast<double>(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        double p = random_elm_predict(m1, test.features.row(i));
        err += (p - test.labels[i]) * (p - test.labels[i]);
        base += (mean - test.labels[i]) * (mean - test.labels[i]);
    }
    CHECK(err < base); // beats the constant-mean predictor
}

TEST_CASE("elm: prediction is pure (bit-identical on repeat)") {
    auto train = testing::make_separated_dataset(4, 20, 0.0, 3.0, 0.3);
    auto model = elm_fit(train, KernelSpec::rbf(0.5), 100.0);
    std::vector<double> x{0.7, 1.3, 2.2, 0.4};
    CHECK(elm_predict(model, x) == elm_predict(model, x));
}

TEST_CASE("random elm: default hidden node count is min(2N, 200)") {
    auto small = testing::make_smooth_dataset(31, 12);
    CHECK(random_elm_fit(small, 10.0, 1).out_weights.size() == 24);
    auto big = testing::make_smooth_dataset(32, 150);
    CHECK(random_elm_fit(big, 10.0, 1).out_weights.size() == 200);
}

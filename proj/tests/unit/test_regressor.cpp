#include <doctest.h>

#include <cmath>

#include "datl/errors.hpp"
#include "datl/metrics.hpp"
#include "datl/regressor.hpp"
#include "support/synthetic.hpp"

using namespace datl;

TEST_CASE("grid_search: single-point grid returns that configuration") {
    auto train = testing::make_smooth_dataset(41, 30);
    auto val = testing::make_smooth_dataset(42, 10);
    RegressorSpec spec;
    spec.method = Method::Grnn;
    spec.sigmas = {0.9};
    auto result = grid_search(spec, train, val);
    CHECK(result.chosen.at("sigma") == doctest::Approx(0.9));
    CHECK(result.model.method() == Method::Grnn);
}

TEST_CASE("grid_search: exact ties go to the earlier grid point") {
    // One training point: every sigma predicts its label, so all RMSEs tie.
    Dataset train;
    train.years = {1960};
    train.features = Matrix(1, kFeatureCount, 0.4);
    train.labels = {2.0};
    train.origin_tags = {"X"};
    auto val = testing::make_smooth_dataset(43, 6);
    RegressorSpec spec;
    spec.method = Method::Grnn;
    spec.sigmas = {0.5, 1.0, 2.0};
    auto result = grid_search(spec, train, val);
    CHECK(result.chosen.at("sigma") == doctest::Approx(0.5));
}

namespace {

// Sine sampled densely along a line through feature space, with label noise
// on the training side. Averaging a few neighbors beats snapping to the
// nearest noisy one, so a smoothing sigma should win the grid.
Dataset sine_over_line(std::uint64_t seed, std::size_t n, double noise) {
    Rng rng(seed);
    Dataset d;
    d.features = Matrix(n, kFeatureCount);
    for (std::size_t i = 0; i < n; ++i) {
        double t = rng.uniform(0.0, 3.0);
        d.years.push_back(static_cast<int>(i));
        for (std::size_t c = 0; c < kFeatureCount; ++c) d.features(i, c) = 0.5 * t;
        d.labels.push_back(10.0 * std::sin(2.0 * t) + noise * rng.normal());
        d.origin_tags.push_back("LINE");
    }
    return d;
}

} // namespace

TEST_CASE("grid_search: a tuned sigma beats a nearest-neighbor-tiny one on noisy smooth data") {
    auto train = sine_over_line(44, 100, 0.8);
    auto val = sine_over_line(45, 50, 0.0);
    const double tuned = 0.075; // a couple of sample spacings

    RegressorSpec spec;
    spec.method = Method::Grnn;
    spec.sigmas = {1e-6, tuned};
    auto result = grid_search(spec, train, val);
    CHECK(result.chosen.at("sigma") == doctest::Approx(tuned));

    // Double-check by scoring both candidates directly.
    auto score = [&](double sigma) {
        auto model = grnn_fit(train, sigma);
        std::vector<double> pred(val.size());
        for (std::size_t i = 0; i < val.size(); ++i)
            pred[i] = grnn_predict(model, val.features.row(i));
        return rmse(PredictionPairs(val.labels, pred));
    };
    CHECK(score(tuned) < score(1e-6));
    CHECK(result.validation_rmse == doctest::Approx(score(tuned)));
}

TEST_CASE("grid_search: every candidate failing aggregates the causes") {
    // Identical rows + effectively no ridge: the kernel solve cannot succeed.
    Dataset train;
    train.years = {1960, 1961};
    train.features = Matrix(2, kFeatureCount, 1.0);
    train.labels = {1.0, 2.0};
    train.origin_tags = {"X", "X"};
    auto val = testing::make_smooth_dataset(46, 5);
    RegressorSpec spec;
    spec.method = Method::Elm;
    spec.cs = {1e18};
    spec.gammas = {0.25};
    CHECK_THROWS_AS(grid_search(spec, train, val), AllCandidatesFailedError);
}

TEST_CASE("default grids have the documented shapes") {
    auto train = testing::make_smooth_dataset(47, 25);
    CHECK(default_sigma_grid(train).size() == 4);
    CHECK(default_c_grid() == std::vector<double>{1.0, 10.0, 100.0, 1000.0, 10000.0});
    CHECK(default_epsilon_grid(train).size() == 3);
    CHECK(default_gamma_grid() == std::vector<double>{0.0025, 0.025, 0.25, 2.5});

    RegressorSpec svr_spec;
    svr_spec.method = Method::Svr;
    CHECK(enumerate_grid(svr_spec, train).size() == 5 * 3 * 4);
    RegressorSpec elm_spec;
    elm_spec.method = Method::Elm;
    CHECK(enumerate_grid(elm_spec, train).size() == 5 * 4);
}

TEST_CASE("regressor specs validate their grids") {
    RegressorSpec spec;
    spec.method = Method::Grnn;
    spec.sigmas = {-1.0};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.sigmas = {1.0};
    CHECK_NOTHROW(spec.validate());
    spec.method = Method::Svr;
    spec.epsilons = {0.0}; // zero epsilon is allowed
    CHECK_NOTHROW(spec.validate());
    spec.epsilons = {-0.5};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::Grnn, Method::Elm, Method::Svr})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK_THROWS_AS(method_from_name("forest"), ConfigError);
}

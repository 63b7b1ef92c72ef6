#include <doctest.h>

#include "datl/errors.hpp"
#include "datl/kernel.hpp"
#include "support/synthetic.hpp"

using namespace datl;

TEST_CASE("kernel: rbf is 1 on the diagonal and symmetric") {
    auto d = testing::make_smooth_dataset(71, 15);
    auto k = kernel_matrix(KernelSpec::rbf(0.7), d.features);
    for (std::size_t i = 0; i < k.rows(); ++i) {
        CHECK(k(i, i) == doctest::Approx(1.0));
        for (std::size_t j = 0; j < k.cols(); ++j) CHECK(k(i, j) == k(j, i));
    }
}

TEST_CASE("kernel: linear is the dot product") {
    KernelSpec lin = KernelSpec::linear();
    std::vector<double> a{1.0, 2.0, 3.0, 4.0}, b{-1.0, 0.5, 2.0, 0.0};
    CHECK(lin(a, b) == doctest::Approx(1.0 * -1.0 + 2.0 * 0.5 + 3.0 * 2.0));
}

TEST_CASE("kernel: rbf bandwidth must be positive") {
    CHECK_THROWS_AS(KernelSpec::rbf(0.0), InvalidHyperparameterError);
    CHECK_THROWS_AS(KernelSpec::rbf(-1.0), InvalidHyperparameterError);
}

TEST_CASE("kernel: rbf values decay with distance and stay in (0, 1]") {
    KernelSpec k = KernelSpec::rbf(1.0);
    std::vector<double> origin{0.0, 0.0, 0.0, 0.0};
    std::vector<double> near{0.1, 0.0, 0.0, 0.0};
    std::vector<double> far{2.0, 0.0, 0.0, 0.0};
    CHECK(k(origin, origin) == 1.0);
    CHECK(k(origin, near) > k(origin, far));
    CHECK(k(origin, far) > 0.0);
}

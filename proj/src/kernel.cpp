#include "datl/kernel.hpp"

#include <cmath>

#include "datl/errors.hpp"

namespace datl {

KernelSpec KernelSpec::rbf(double gamma) {
    if (!(gamma > 0.0))
        throw InvalidHyperparameterError("rbf gamma must be > 0, got " + std::to_string(gamma));
    return KernelSpec{KernelKind::Rbf, gamma};
}

KernelSpec KernelSpec::linear() { return KernelSpec{KernelKind::Linear, 0.0}; }

double KernelSpec::operator()(std::span<const double> a, std::span<const double> b) const {
    if (kind == KernelKind::Linear) return dot(a, b);
    return std::exp(-gamma * squared_distance(a, b));
}

Matrix kernel_matrix(const KernelSpec& kernel, const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double v = kernel(x.row(i), x.row(j));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

std::string kernel_kind_name(KernelKind kind) {
    return kind == KernelKind::Rbf ? "rbf" : "linear";
}

} // namespace datl

#pragma once

#include <span>
#include <string>

#include "datl/linalg.hpp"

namespace datl {

enum class KernelKind { Rbf, Linear };

// RBF: K(a, b) = exp(-gamma * ||a - b||^2); Linear: K(a, b) = a . b.
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0; // bandwidth, rbf only

    static KernelSpec rbf(double gamma);
    static KernelSpec linear();

    double operator()(std::span<const double> a, std::span<const double> b) const;
};

// Full Gram matrix of the rows of x (symmetric, unit diagonal for rbf).
Matrix kernel_matrix(const KernelSpec& kernel, const Matrix& x);

std::string kernel_kind_name(KernelKind kind);

} // namespace datl

#pragma once

#include <span>

#include "datl/dataset.hpp"
#include "datl/kernel.hpp"

namespace datl {

// Epsilon-insensitive support vector regression. The dual is solved by
// two-variable working-set updates on the paired box variables; dual_coeffs
// holds the per-point net coefficient (upper minus lower multiplier).
struct SvrModel {
    Matrix train_features;
    KernelSpec kernel;
    std::vector<double> dual_coeffs; // each in [-C, C], sums to ~0
    double bias = 0.0;
    double c = 1.0;
    double epsilon = 0.0;
    double dual_objective = 0.0; // value reached by the solver
};

struct SvrOptions {
    // Stop when the maximal KKT violation drops below this; when negative the
    // default 1e-3 * (label range) applies.
    double tol = -1.0;
    // Pair-update cap; when negative the default 100 * N^2 applies.
    long long max_updates = -1;
};

SvrModel svr_fit(const Dataset& train, const KernelSpec& kernel, double c, double epsilon,
                 const SvrOptions& options = {});

double svr_predict(const SvrModel& model, std::span<const double> x);

// Dense verification path: projected gradient ascent over the paired box
// variables with hyperplane projection, run from a zero start until the
// projected step displacement falls below 1e-8. Enforces N <= 64.
struct QpSolution {
    std::vector<double> dual_coeffs;
    double objective = 0.0;
};

QpSolution qp_oracle(const Dataset& train, const KernelSpec& kernel, double c, double epsilon);

// Objective both solvers maximize:
//   y^T b - 0.5 b^T K b - epsilon * sum(|b_i|-style pair mass)
// evaluated from the paired multipliers (gamma, theta).
double svr_dual_objective(const Matrix& k, const std::vector<double>& labels,
                          const std::vector<double>& gammas, const std::vector<double>& thetas,
                          double epsilon);

} // namespace datl

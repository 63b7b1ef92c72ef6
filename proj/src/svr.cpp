#include "datl/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "datl/errors.hpp"

namespace datl {

namespace {

constexpr double kTau = 1e-12; // curvature floor for degenerate pairs

struct PairProblem {
    // Working variables: index t < n is gamma_t (sign +1), t >= n is
    // theta_{t-n} (sign -1). net coefficient beta = gamma - theta.
    const Matrix& k;
    const std::vector<double>& y;
    double c;
    double epsilon;
    std::size_t n;

    std::vector<double> gamma, theta;
    std::vector<double> u; // K * beta

    PairProblem(const Matrix& k_in, const std::vector<double>& y_in, double c_in, double eps_in)
        : k(k_in), y(y_in), c(c_in), epsilon(eps_in), n(y_in.size()), gamma(n, 0.0),
          theta(n, 0.0), u(n, 0.0) {}

    double val(std::size_t t) const {
        std::size_t s = t < n ? t : t - n;
        return t < n ? y[s] - u[s] - epsilon : y[s] - u[s] + epsilon;
    }
    bool up_feasible(std::size_t t) const { return t < n ? gamma[t] < c : theta[t - n] > 0.0; }
    bool low_feasible(std::size_t t) const { return t < n ? gamma[t] > 0.0 : theta[t - n] < c; }

    double& alpha(std::size_t t) { return t < n ? gamma[t] : theta[t - n]; }
    double sign(std::size_t t) const { return t < n ? 1.0 : -1.0; }
    std::size_t point(std::size_t t) const { return t < n ? t : t - n; }
};

} // namespace

double svr_dual_objective(const Matrix& k, const std::vector<double>& labels,
                          const std::vector<double>& gammas, const std::vector<double>& thetas,
                          double epsilon) {
    const std::size_t n = labels.size();
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = gammas[i] - thetas[i];
    double lin = 0.0, quad = 0.0, pair_mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lin += labels[i] * beta[i];
        pair_mass += gammas[i] + thetas[i];
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += k(i, j) * beta[j];
        quad += beta[i] * row;
    }
    return lin - 0.5 * quad - epsilon * pair_mass;
}

SvrModel svr_fit(const Dataset& train, const KernelSpec& kernel, double c, double epsilon,
                 const SvrOptions& options) {
    if (train.size() == 0) throw EmptyDatasetError("svr_fit: empty training set");
    if (!(c > 0.0)) throw InvalidHyperparameterError("svr C must be > 0, got " + std::to_string(c));
    if (epsilon < 0.0)
        throw InvalidHyperparameterError("svr epsilon must be >= 0, got " + std::to_string(epsilon));

    const std::size_t n = train.size();
    const Matrix k = kernel_matrix(kernel, train.features);
    PairProblem p(k, train.labels, c, epsilon);

    double lo = *std::min_element(train.labels.begin(), train.labels.end());
    double hi = *std::max_element(train.labels.begin(), train.labels.end());
    const double tol = options.tol >= 0.0 ? options.tol : 1e-3 * (hi - lo);
    const long long cap = options.max_updates >= 0
                              ? options.max_updates
                              : 100LL * static_cast<long long>(n) * static_cast<long long>(n);

    double gap = std::numeric_limits<double>::infinity();
    long long updates = 0;
    while (true) {
        // Maximal violating pair over the 2n working variables.
        double m = -std::numeric_limits<double>::infinity();
        double mm = std::numeric_limits<double>::infinity();
        std::size_t i = 2 * n, j = 2 * n;
        for (std::size_t t = 0; t < 2 * n; ++t) {
            double v = p.val(t);
            if (p.up_feasible(t) && v > m) {
                m = v;
                i = t;
            }
            if (p.low_feasible(t) && v < mm) {
                mm = v;
                j = t;
            }
        }
        gap = m - mm;
        if (!(gap > tol)) break;
        if (updates >= cap)
            throw ConvergenceFailureError(
                "svr_fit: pair-update cap " + std::to_string(cap) +
                    " reached with KKT violation " + std::to_string(gap),
                gap);
        ++updates;

        const std::size_t si = p.point(i), sj = p.point(j);
        const double zi = p.sign(i), zj = p.sign(j);
        // Min-form gradient entries for the selected pair.
        const double gi = -zi * p.val(i);
        const double gj = -zj * p.val(j);
        const double old_ai = p.alpha(i), old_aj = p.alpha(j);
        double ai = old_ai, aj = old_aj;

        if (zi != zj) {
            double quad = k(si, si) + k(sj, sj) + 2.0 * zi * zj * k(si, sj);
            if (quad <= 0.0) quad = kTau;
            double delta = (-gi - gj) / quad;
            double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
                if (ai > c) {
                    ai = c;
                    aj = c - diff;
                }
            } else {
                if (ai < 0.0) {
                    ai = 0.0;
                    aj = -diff;
                }
                if (aj > c) {
                    aj = c;
                    ai = c + diff;
                }
            }
        } else {
            double quad = k(si, si) + k(sj, sj) - 2.0 * zi * zj * k(si, sj);
            if (quad <= 0.0) quad = kTau;
            double delta = (gi - gj) / quad;
            double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) {
                    ai = c;
                    aj = sum - c;
                }
                if (aj > c) {
                    aj = c;
                    ai = sum - c;
                }
            } else {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = sum;
                }
                if (ai < 0.0) {
                    ai = 0.0;
                    aj = sum;
                }
            }
        }

        p.alpha(i) = ai;
        p.alpha(j) = aj;
        const double dbi = zi * (ai - old_ai);
        const double dbj = zj * (aj - old_aj);
        if (dbi != 0.0 || dbj != 0.0)
            for (std::size_t t = 0; t < n; ++t) p.u[t] += k(t, si) * dbi + k(t, sj) * dbj;
    }

    // Bias from free support vectors; midpoint of the final bounds otherwise.
    double b_sum = 0.0;
    std::size_t b_count = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (p.gamma[s] > 0.0 && p.gamma[s] < c) {
            b_sum += p.y[s] - p.u[s] - epsilon;
            ++b_count;
        }
        if (p.theta[s] > 0.0 && p.theta[s] < c) {
            b_sum += p.y[s] - p.u[s] + epsilon;
            ++b_count;
        }
    }
    double bias;
    if (b_count > 0) {
        bias = b_sum / static_cast<double>(b_count);
    } else {
        double m = -std::numeric_limits<double>::infinity();
        double mm = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < 2 * n; ++t) {
            if (p.up_feasible(t)) m = std::max(m, p.val(t));
            if (p.low_feasible(t)) mm = std::min(mm, p.val(t));
        }
        bias = 0.5 * (m + mm);
    }

    SvrModel model;
    model.train_features = train.features;
    model.kernel = kernel;
    model.dual_coeffs.resize(n);
    for (std::size_t s = 0; s < n; ++s) model.dual_coeffs[s] = p.gamma[s] - p.theta[s];
    model.bias = bias;
    model.c = c;
    model.epsilon = epsilon;
    model.dual_objective = svr_dual_objective(k, train.labels, p.gamma, p.theta, epsilon);
    return model;
}

double svr_predict(const SvrModel& model, std::span<const double> x) {
    double s = model.bias;
    for (std::size_t i = 0; i < model.dual_coeffs.size(); ++i) {
        if (model.dual_coeffs[i] == 0.0) continue;
        s += model.dual_coeffs[i] * model.kernel(model.train_features.row(i), x);
    }
    return s;
}

QpSolution qp_oracle(const Dataset& train, const KernelSpec& kernel, double c, double epsilon) {
    const std::size_t n = train.size();
    if (n == 0) throw EmptyDatasetError("qp_oracle: empty training set");
    if (n > 64)
        throw DomainError("qp_oracle: dense method limited to N <= 64, got " + std::to_string(n));
    if (c < 0.0) throw InvalidHyperparameterError("qp_oracle: C must be >= 0");
    if (epsilon < 0.0) throw InvalidHyperparameterError("qp_oracle: epsilon must be >= 0");

    const Matrix k = kernel_matrix(kernel, train.features);
    const std::vector<double>& y = train.labels;
    const std::size_t dim = 2 * n;

    // Lipschitz bound for the gradient: infinity norm of the paired Hessian.
    double lip = kTau;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(k(i, j));
        lip = std::max(lip, 2.0 * row);
    }
    const double step = 1.0 / lip;

    auto clip = [&](double v) { return std::min(c, std::max(0.0, v)); };

    // Projection onto the box intersected with the signed-sum hyperplane:
    // bisection on the hyperplane multiplier.
    auto project = [&](std::vector<double>& v) {
        auto signed_sum = [&](double lambda) {
            double s = 0.0;
            for (std::size_t t = 0; t < dim; ++t) {
                double z = t < n ? 1.0 : -1.0;
                s += z * clip(v[t] - lambda * z);
            }
            return s;
        };
        double span = c + 1.0;
        for (std::size_t t = 0; t < dim; ++t) span = std::max(span, std::abs(v[t]) + c + 1.0);
        double lo = -span, hi = span;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (signed_sum(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        double lambda = 0.5 * (lo + hi);
        for (std::size_t t = 0; t < dim; ++t) {
            double z = t < n ? 1.0 : -1.0;
            v[t] = clip(v[t] - lambda * z);
        }
    };

    std::vector<double> alpha(dim, 0.0);
    std::vector<double> trial(dim);
    std::vector<double> u(n);
    const long long cap = 5'000'000;
    bool converged = false;
    for (long long it = 0; it < cap; ++it) {
        // u = K * beta
        for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += k(s, j) * (alpha[j] - alpha[j + n]);
            u[s] = acc;
        }
        // Ascent step on the maximization objective.
        for (std::size_t t = 0; t < dim; ++t) {
            std::size_t s = t < n ? t : t - n;
            double grad = t < n ? y[s] - u[s] - epsilon : -(y[s] - u[s]) - epsilon;
            trial[t] = alpha[t] + step * grad;
        }
        project(trial);
        double disp = 0.0;
        for (std::size_t t = 0; t < dim; ++t) disp = std::max(disp, std::abs(trial[t] - alpha[t]));
        alpha.swap(trial);
        if (disp <= 1e-8) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceFailureError("qp_oracle: projected gradient did not reach 1e-8", 0.0);

    QpSolution sol;
    sol.dual_coeffs.resize(n);
    std::vector<double> gammas(alpha.begin(), alpha.begin() + n);
    std::vector<double> thetas(alpha.begin() + n, alpha.end());
    for (std::size_t s = 0; s < n; ++s) sol.dual_coeffs[s] = gammas[s] - thetas[s];
    sol.objective = svr_dual_objective(k, y, gammas, thetas, epsilon);
    return sol;
}

} // namespace datl

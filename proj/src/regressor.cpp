#include "datl/regressor.hpp"

#include <cmath>

#include "datl/errors.hpp"
#include "datl/metrics.hpp"

namespace datl {

std::string method_name(Method m) {
    switch (m) {
    case Method::Grnn: return "grnn";
    case Method::Elm: return "elm";
    case Method::Svr: return "svr";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "grnn") return Method::Grnn;
    if (name == "elm") return Method::Elm;
    if (name == "svr") return Method::Svr;
    throw ConfigError("unknown regressor '" + name + "' (expected grnn, elm, or svr)");
}

void RegressorSpec::validate() const {
    auto all_positive = [](const std::vector<double>& v, const std::string& what) {
        for (double x : v)
            if (!(x > 0.0) || !std::isfinite(x))
                throw ConfigError(what + " grid entries must be positive, got " +
                                  std::to_string(x));
    };
    all_positive(sigmas, "sigma");
    all_positive(cs, "C");
    all_positive(gammas, "gamma");
    for (double e : epsilons)
        if (e < 0.0 || !std::isfinite(e))
            throw ConfigError("epsilon grid entries must be >= 0, got " + std::to_string(e));
}

double TrainedModel::predict(std::span<const double> x) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GrnnModel>) return grnn_predict(m, x);
            else if constexpr (std::is_same_v<T, ElmModel>) return elm_predict(m, x);
            else return svr_predict(m, x);
        },
        model_);
}

Method TrainedModel::method() const {
    if (std::holds_alternative<GrnnModel>(model_)) return Method::Grnn;
    if (std::holds_alternative<ElmModel>(model_)) return Method::Elm;
    return Method::Svr;
}

std::vector<double> default_sigma_grid(const Dataset& train) {
    const std::size_t n = train.size();
    double mean_dist = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            mean_dist += std::sqrt(squared_distance(train.features.row(i), train.features.row(j)));
            ++pairs;
        }
    mean_dist = pairs > 0 ? mean_dist / static_cast<double>(pairs) : 0.0;
    if (mean_dist < 1e-12) mean_dist = 1.0; // degenerate: single point or duplicates
    return {0.25 * mean_dist, 0.5 * mean_dist, 1.0 * mean_dist, 2.0 * mean_dist};
}

std::vector<double> default_c_grid() { return {1.0, 10.0, 100.0, 1000.0, 10000.0}; }

std::vector<double> default_epsilon_grid(const Dataset& train) {
    double s = vector_stdev(train.labels);
    return {0.01 * s, 0.05 * s, 0.1 * s};
}

std::vector<double> default_gamma_grid() {
    const double d = static_cast<double>(kFeatureCount);
    return {0.01 / d, 0.1 / d, 1.0 / d, 10.0 / d};
}

std::vector<Hyperparameters> enumerate_grid(const RegressorSpec& spec, const Dataset& train) {
    spec.validate();
    std::vector<Hyperparameters> grid;
    switch (spec.method) {
    case Method::Grnn: {
        auto sigmas = spec.sigmas.empty() ? default_sigma_grid(train) : spec.sigmas;
        for (double s : sigmas) grid.push_back({{"sigma", s}});
        break;
    }
    case Method::Elm: {
        auto cs = spec.cs.empty() ? default_c_grid() : spec.cs;
        auto gammas = spec.gammas.empty() ? default_gamma_grid() : spec.gammas;
        for (double c : cs)
            for (double g : gammas) grid.push_back({{"C", c}, {"gamma", g}});
        break;
    }
    case Method::Svr: {
        auto cs = spec.cs.empty() ? default_c_grid() : spec.cs;
        auto epsilons = spec.epsilons.empty() ? default_epsilon_grid(train) : spec.epsilons;
        auto gammas = spec.gammas.empty() ? default_gamma_grid() : spec.gammas;
        for (double c : cs)
            for (double e : epsilons)
                for (double g : gammas)
                    grid.push_back({{"C", c}, {"epsilon", e}, {"gamma", g}});
        break;
    }
    }
    if (grid.empty()) throw ConfigError("empty hyperparameter grid");
    return grid;
}

namespace {
KernelSpec kernel_for(const RegressorSpec& spec, const Hyperparameters& params) {
    if (spec.kernel == KernelKind::Linear) return KernelSpec::linear();
    return KernelSpec::rbf(params.at("gamma"));
}
} // namespace

TrainedModel fit_with(const RegressorSpec& spec, const Dataset& train,
                      const Hyperparameters& params) {
    switch (spec.method) {
    case Method::Grnn: return TrainedModel(grnn_fit(train, params.at("sigma")));
    case Method::Elm: return TrainedModel(elm_fit(train, kernel_for(spec, params), params.at("C")));
    case Method::Svr:
        return TrainedModel(
            svr_fit(train, kernel_for(spec, params), params.at("C"), params.at("epsilon")));
    }
    throw DomainError("unreachable regressor method");
}

GridSearchResult grid_search(const RegressorSpec& spec, const Dataset& train,
                             const Dataset& validation) {
    if (validation.size() == 0) throw EmptyDatasetError("grid_search: empty validation set");
    auto grid = enumerate_grid(spec, train);

    std::optional<GridSearchResult> best;
    std::vector<std::string> failures;
    for (const auto& params : grid) {
        try {
            TrainedModel model = fit_with(spec, train, params);
            std::vector<double> predicted(validation.size());
            for (std::size_t i = 0; i < validation.size(); ++i)
                predicted[i] = model.predict(validation.features.row(i));
            double score = rmse(PredictionPairs(validation.labels, predicted));
            if (!best || score < best->validation_rmse)
                best = GridSearchResult{std::move(model), params, score};
        } catch (const Error& e) {
            std::string desc;
            for (const auto& [k, v] : params) desc += k + "=" + std::to_string(v) + " ";
            failures.push_back(desc + "-> " + e.what());
        }
    }
    if (!best) {
        std::string msg = "grid_search: all " + std::to_string(grid.size()) +
                          " grid points failed for " + method_name(spec.method) + ":";
        for (const auto& f : failures) msg += "\n  " + f;
        throw AllCandidatesFailedError(msg);
    }
    return std::move(*best);
}

} // namespace datl

#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "datl/dataset.hpp"
#include "datl/elm.hpp"
#include "datl/grnn.hpp"
#include "datl/svr.hpp"

namespace datl {

enum class Method { Grnn, Elm, Svr };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Hyperparameter grid (or fixed values) for one method. Empty lists fall
// back to the documented data-driven defaults at search time.
struct RegressorSpec {
    Method method = Method::Grnn;
    std::vector<double> sigmas;   // grnn
    std::vector<double> cs;       // elm, svr
    std::vector<double> epsilons; // svr
    std::vector<double> gammas;   // elm, svr (rbf bandwidth)
    KernelKind kernel = KernelKind::Rbf;

    void validate() const;
};

using Hyperparameters = std::map<std::string, double>;

// A fitted model of any method, immutable after construction.
class TrainedModel {
public:
    explicit TrainedModel(GrnnModel m) : model_(std::move(m)) {}
    explicit TrainedModel(ElmModel m) : model_(std::move(m)) {}
    explicit TrainedModel(SvrModel m) : model_(std::move(m)) {}

    double predict(std::span<const double> x) const;
    Method method() const;

private:
    std::variant<GrnnModel, ElmModel, SvrModel> model_;
};

struct GridSearchResult {
    TrainedModel model;
    Hyperparameters chosen;
    double validation_rmse = 0.0;
};

// Default grids. Sigma brackets the mean pairwise distance of the training
// inputs; C walks decades 1..1e4; epsilon scales with the label spread;
// gamma is {0.01,0.1,1,10} divided by the feature dimension.
std::vector<double> default_sigma_grid(const Dataset& train);
std::vector<double> default_c_grid();
std::vector<double> default_epsilon_grid(const Dataset& train);
std::vector<double> default_gamma_grid();

// Concrete grid points for a spec against a training set, in enumeration
// order (the tie-break order for grid_search).
std::vector<Hyperparameters> enumerate_grid(const RegressorSpec& spec, const Dataset& train);

TrainedModel fit_with(const RegressorSpec& spec, const Dataset& train,
                      const Hyperparameters& params);

// Trains one model per grid point, scores RMSE on the validation set, and
// returns the minimizer; exact ties go to the earlier grid point. Grid points
// that fail to train are skipped; if all fail the causes are aggregated into
// an AllCandidatesFailedError.
GridSearchResult grid_search(const RegressorSpec& spec, const Dataset& train,
                             const Dataset& validation);

} // namespace datl

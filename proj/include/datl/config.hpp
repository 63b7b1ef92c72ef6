#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "datl/fraction.hpp"
#include "datl/transfer.hpp"
#include "datl/worldbank.hpp"

namespace datl {

struct IndicatorSource {
    std::string role; // gas_pct, liquid_pct, solid_pct, co2_per_capita, gdp_per_capita
    std::filesystem::path path;
    std::string code;
};

// Effective run configuration: indicator files, country sets, regressor
// grids, transfer defaults, and output locations. Paths are resolved against
// the working directory at load time.
struct RunConfig {
    std::array<IndicatorSource, 5> indicators; // channel order
    YearWindow year_window{1960, 2013};
    std::vector<std::string> countries;         // pairwise experiment set
    std::vector<std::string> missing_countries; // missing-GDP estimation set
    std::vector<std::string> candidate_sources; // sources for estimate-missing
    std::vector<RegressorSpec> regressors;
    Fraction td_fraction{1, 3};
    MixingPolicy mixing_policy = MixingPolicy::EarliestYears;
    ValidationSplit validation_split = ValidationSplit::SeededRandom;
    std::uint64_t seed = 42;
    std::vector<Fraction> sweep_fractions;
    std::filesystem::path output_dir; // resolved
    std::filesystem::path bundle_path; // resolved

    nlohmann::json echo; // document as loaded, for manifests
};

// Loads and validates a JSON config document. Relative paths inside the
// document resolve against `workdir`. Fails with ConfigError when a
// referenced indicator file does not exist.
RunConfig load_config(const std::filesystem::path& config_path,
                      const std::filesystem::path& workdir);

RegressorSpec regressor_spec_from_json(const nlohmann::json& j);

} // namespace datl

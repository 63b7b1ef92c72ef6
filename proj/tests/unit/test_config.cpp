#include <doctest.h>

#include <fstream>

#include "datl/config.hpp"
#include "datl/errors.hpp"
#include "support/testutil.hpp"

using namespace datl;

TEST_CASE("fraction: exact parsing and normalization") {
    CHECK(Fraction::parse("1/18") == Fraction(1, 18));
    CHECK(Fraction::parse("0") == Fraction(0, 1));
    CHECK(Fraction::parse("3/6") == Fraction(1, 2));
    CHECK(Fraction::parse("2") == Fraction(2, 1));
    CHECK_THROWS_AS(Fraction::parse("x"), ConfigError);
    CHECK_THROWS_AS(Fraction::parse("1/0"), ConfigError);
    CHECK_THROWS_AS(Fraction::parse("-1/2"), ConfigError);
    CHECK_THROWS_AS(Fraction::parse("1/ 2"), ConfigError);
}

TEST_CASE("fraction: exact rounding of f * n") {
    CHECK(Fraction(1, 18).rounded_times(54) == 3);
    CHECK(Fraction(1, 9).rounded_times(54) == 6);
    CHECK(Fraction(1, 6).rounded_times(54) == 9);
    CHECK(Fraction(1, 3).rounded_times(54) == 18);
    CHECK(Fraction(1, 2).rounded_times(54) == 27);
    CHECK(Fraction(1, 2).rounded_times(3) == 2); // half rounds up
    CHECK(Fraction(0, 1).rounded_times(54) == 0);
    CHECK(Fraction(1, 3).rounded_times(44) == 15); // 14.67 rounds to 15
}

TEST_CASE("fraction: string form is exact") {
    CHECK(Fraction(1, 3).str() == "1/3");
    CHECK(Fraction(0, 1).str() == "0");
    CHECK(Fraction(2, 1).str() == "2");
}

namespace {

testing::fs::path write_config(const std::string& body) {
    auto dir = testing::make_temp_dir("config");
    // Indicator files must exist for validation to pass.
    for (const char* name : {"a.csv", "b.csv", "c.csv", "d.csv", "e.csv"})
        std::ofstream(dir / name) << "stub";
    auto path = dir / "conf.json";
    std::ofstream(path) << body;
    return path;
}

const char* kMinimalConfig = R"({
  "indicators": {
    "gas_pct":        {"path": "a.csv", "code": "G"},
    "liquid_pct":     {"path": "b.csv", "code": "L"},
    "solid_pct":      {"path": "c.csv", "code": "S"},
    "co2_per_capita": {"path": "d.csv", "code": "C"},
    "gdp_per_capita": {"path": "e.csv", "code": "Y"}
  },
  "countries": ["AAA", "BBB"]
})";

} // namespace

TEST_CASE("config: minimal document loads with documented defaults") {
    auto path = write_config(kMinimalConfig);
    auto cfg = load_config(path, path.parent_path());
    CHECK(cfg.year_window == YearWindow{1960, 2013});
    CHECK(cfg.seed == 42);
    CHECK(cfg.td_fraction == Fraction(1, 3));
    CHECK(cfg.mixing_policy == MixingPolicy::EarliestYears);
    CHECK(cfg.regressors.size() == 3);
    CHECK(cfg.countries == std::vector<std::string>{"AAA", "BBB"});
    CHECK(cfg.candidate_sources == cfg.countries); // defaults to the experiment set
    CHECK(cfg.output_dir.filename() == "reports");
}

TEST_CASE("config: missing indicator file names the role") {
    std::string body = kMinimalConfig;
    auto pos = body.find("e.csv");
    body.replace(pos, 5, "nope.csv");
    auto path = write_config(body);
    try {
        load_config(path, path.parent_path());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gdp_per_capita") != std::string::npos);
    }
}

TEST_CASE("config: malformed json and missing roles are config errors") {
    auto path = write_config("{not json");
    CHECK_THROWS_AS(load_config(path, path.parent_path()), ConfigError);
    auto path2 = write_config(R"({"indicators": {}})");
    CHECK_THROWS_AS(load_config(path2, path2.parent_path()), ConfigError);
}

TEST_CASE("config: regressor specs parse grids and kernels") {
    auto spec = regressor_spec_from_json(nlohmann::json::parse(
        R"({"method": "svr", "C": [1, 10], "epsilon": [0.1], "gamma": [0.5], "kernel": "rbf"})"));
    CHECK(spec.method == Method::Svr);
    CHECK(spec.cs == std::vector<double>{1.0, 10.0});
    CHECK(spec.epsilons == std::vector<double>{0.1});
    CHECK_THROWS_AS(regressor_spec_from_json(nlohmann::json::parse(
                        R"({"method": "svr", "C": [-1]})")),
                    ConfigError);
    CHECK_THROWS_AS(regressor_spec_from_json(nlohmann::json::parse(
                        R"({"method": "grnn", "kernel": "poly"})")),
                    ConfigError);
}

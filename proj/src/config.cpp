#include "datl/config.hpp"

#include <fstream>

#include "datl/errors.hpp"

namespace datl {

namespace fs = std::filesystem;
using nlohmann::json;

RegressorSpec regressor_spec_from_json(const json& j) {
    RegressorSpec spec;
    spec.method = method_from_name(j.at("method").get<std::string>());
    auto grab = [&](const char* key, std::vector<double>& dest) {
        if (j.contains(key)) dest = j.at(key).get<std::vector<double>>();
    };
    grab("sigma", spec.sigmas);
    grab("C", spec.cs);
    grab("epsilon", spec.epsilons);
    grab("gamma", spec.gammas);
    if (j.contains("kernel")) {
        std::string k = j.at("kernel").get<std::string>();
        if (k == "rbf") spec.kernel = KernelKind::Rbf;
        else if (k == "linear") spec.kernel = KernelKind::Linear;
        else throw ConfigError("unknown kernel '" + k + "'");
    }
    spec.validate();
    return spec;
}

namespace {

RunConfig parse_config_doc(const json& doc, const fs::path& workdir) {
    RunConfig cfg;
    cfg.echo = doc;

    static const std::array<std::string, 5> roles = {"gas_pct", "liquid_pct", "solid_pct",
                                                     "co2_per_capita", "gdp_per_capita"};
    if (!doc.contains("indicators")) throw ConfigError("config lacks 'indicators'");
    for (std::size_t i = 0; i < roles.size(); ++i) {
        if (!doc.at("indicators").contains(roles[i]))
            throw ConfigError("config lacks indicator role '" + roles[i] + "'");
        const json& entry = doc.at("indicators").at(roles[i]);
        IndicatorSource src;
        src.role = roles[i];
        src.path = workdir / fs::path(entry.at("path").get<std::string>());
        src.code = entry.at("code").get<std::string>();
        if (!fs::exists(src.path))
            throw ConfigError("indicator file for role '" + roles[i] + "' not found: " +
                              src.path.string());
        cfg.indicators[i] = std::move(src);
    }

    if (doc.contains("year_window")) {
        auto w = doc.at("year_window").get<std::vector<int>>();
        if (w.size() != 2 || w[0] > w[1])
            throw ConfigError("year_window must be [first, last] with first <= last");
        cfg.year_window = {w[0], w[1]};
    }

    cfg.countries = doc.value("countries", std::vector<std::string>{});
    cfg.missing_countries = doc.value("missing_countries", std::vector<std::string>{});
    cfg.candidate_sources = doc.value("candidate_sources", cfg.countries);

    if (doc.contains("regressors")) {
        for (const auto& r : doc.at("regressors"))
            cfg.regressors.push_back(regressor_spec_from_json(r));
    } else {
        for (Method m : {Method::Grnn, Method::Elm, Method::Svr}) {
            RegressorSpec spec;
            spec.method = m;
            cfg.regressors.push_back(std::move(spec));
        }
    }

    if (doc.contains("transfer")) {
        const json& t = doc.at("transfer");
        if (t.contains("td_fraction"))
            cfg.td_fraction = Fraction::parse(t.at("td_fraction").get<std::string>());
        if (t.contains("mixing_policy"))
            cfg.mixing_policy = mixing_policy_from_name(t.at("mixing_policy").get<std::string>());
        if (t.contains("seed")) cfg.seed = t.at("seed").get<std::uint64_t>();
        if (t.contains("validation_split"))
            cfg.validation_split =
                validation_split_from_name(t.at("validation_split").get<std::string>());
    }

    if (doc.contains("sweep_fractions"))
        for (const auto& f : doc.at("sweep_fractions"))
            cfg.sweep_fractions.push_back(Fraction::parse(f.get<std::string>()));

    cfg.output_dir = workdir / fs::path(doc.value("output_dir", std::string("reports")));
    cfg.bundle_path = workdir / fs::path(doc.value("bundle", std::string("bundle.json")));
    return cfg;
}

} // namespace

RunConfig load_config(const fs::path& config_path, const fs::path& workdir) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + config_path.string() + " is not valid JSON: " + e.what());
    }
    try {
        return parse_config_doc(doc, workdir);
    } catch (const json::exception& e) {
        throw ConfigError("config " + config_path.string() + ": " + e.what());
    }
}

} // namespace datl

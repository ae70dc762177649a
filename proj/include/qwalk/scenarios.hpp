#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qwalk/checks.hpp"

namespace qwalk {

struct ScenarioInfo {
    std::string name;
    std::string description;
    std::string reproduces;  // figure or table the data corresponds to
    int criterion = 0;       // acceptance criterion run by `check`, 0 if none
};

// stable order
const std::vector<ScenarioInfo>& list_scenarios();
const ScenarioInfo& find_scenario(const std::string& name);  // ConfigError if unknown

// {"scenario", "output_dir", "graph", "params", "time", "ensemble", "self_check"}; only "scenario" is required
struct ScenarioConfig {
    std::string scenario;
    std::filesystem::path output_dir;
    nlohmann::json graph = nlohmann::json::object();
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json time = nlohmann::json::object();
    nlohmann::json ensemble = nlohmann::json::object();
    bool self_check = false;

    static ScenarioConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// time: {"linspace": [a, b, n]} | {"logspace": [a, b, n]} | {"values": [...]}
std::vector<double> parse_time_grid(const nlohmann::json& spec);

struct ResultBundle {
    std::filesystem::path dir;
    std::vector<std::string> files;  // relative to dir, sorted
    nlohmann::json manifest;
    std::vector<CriterionReport> checks;
    bool checks_pass() const;
};

// Schema problems raise ConfigError; module failures are rethrown with the scenario name attached.
ResultBundle run_scenario(const ScenarioConfig& cfg);

// Several configs, one isolated output directory each, run concurrently.
std::vector<ResultBundle> run_scenarios(const std::vector<ScenarioConfig>& cfgs);

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qwalk

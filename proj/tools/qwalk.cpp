// qwalk: scenario runner for the walk library.
//   qwalk list [--json]
//   qwalk run <config> [<config>...]
//   qwalk check <scenario | criterion id | all>
// Exit codes: 0 ok, 1 tolerance failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qwalk/checks.hpp"
#include "qwalk/io.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/scenarios.hpp"

namespace fs = std::filesystem;
using namespace qwalk;

namespace {

enum Exit { kOk = 0, kTolerance = 1, kConfig = 2 };

int do_list(bool as_json) {
    if (as_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& s : list_scenarios())
            j.push_back({{"name", s.name}, {"description", s.description}, {"reproduces", s.reproduces},
                         {"criterion", s.criterion}});
        std::cout << j.dump(2) << '\n';
        return kOk;
    }
    for (const auto& s : list_scenarios()) {
        std::printf("%-22s %s\n", s.name.c_str(), s.description.c_str());
        std::printf("%-22s   data for: %s%s\n", "", s.reproduces.c_str(),
                    s.criterion ? (", self-check criterion " + std::to_string(s.criterion)).c_str() : "");
    }
    return kOk;
}

int do_run(const std::vector<std::string>& paths) {
    std::vector<ScenarioConfig> cfgs;
    for (const auto& p : paths) cfgs.push_back(ScenarioConfig::from_json(load_config(p)));
    const auto bundles = run_scenarios(cfgs);
    bool ok = true;
    for (const auto& b : bundles) {
        std::printf("%s -> %s (%zu files, hash %s)\n", b.manifest["scenario"].get<std::string>().c_str(),
                    b.dir.string().c_str(), b.files.size(), b.manifest["config_hash"].get<std::string>().c_str());
        for (const auto& r : b.checks) std::printf("%s\n", r.summary().c_str());
        ok = ok && b.checks_pass();
    }
    return ok ? kOk : kTolerance;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// scenarios without an acceptance criterion: a rerun into the same directory must reproduce every byte
int determinism_check(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qwalk_check_" + name);
    fs::remove_all(dir);
    ScenarioConfig c = ScenarioConfig::from_json({{"scenario", name}});
    c.output_dir = dir;
    const ResultBundle first = run_scenario(c);
    std::vector<std::string> bytes;
    for (const auto& f : first.files) bytes.push_back(slurp(dir / f));
    bytes.push_back(slurp(dir / "manifest.json"));
    const ResultBundle second = run_scenario(c);
    bool same = first.files == second.files;
    for (std::size_t i = 0; same && i < first.files.size(); ++i) same = bytes[i] == slurp(dir / first.files[i]);
    same = same && bytes.back() == slurp(dir / "manifest.json");
    std::printf("[%s] %s: rerun byte-identical over %zu files\n", same ? "PASS" : "FAIL", name.c_str(),
                first.files.size() + 1);
    fs::remove_all(dir);
    return same ? kOk : kTolerance;
}

int do_check(const std::string& target) {
    std::vector<int> ids;
    if (target == "all") {
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    } else if (!target.empty() && std::all_of(target.begin(), target.end(), ::isdigit)) {
        const int id = std::stoi(target);
        if (id < 1 || id > kCriterionCount) throw ConfigError("criterion id must be 1.." + std::to_string(kCriterionCount));
        ids.push_back(id);
    } else {
        const ScenarioInfo& s = find_scenario(target);
        if (s.criterion == 0) return determinism_check(s.name);
        ids.push_back(s.criterion);
    }
    bool ok = true;
    for (int id : ids) {
        const CriterionReport r = run_criterion(id);
        std::printf("%s\n", r.summary().c_str());
        for (const auto& it : r.items)
            std::printf("       %s %s: %s\n", it.info ? "info" : (it.pass ? "ok  " : "FAIL"), it.name.c_str(),
                        it.detail.c_str());
        std::fflush(stdout);
        ok = ok && r.pass();
    }
    return ok ? kOk : kTolerance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qwalk: coherent and incoherent transport on networks"};
    app.set_version_flag("--version", QWALK_VERSION);
    app.require_subcommand(1);

    bool as_json = false;
    auto* list = app.add_subcommand("list", "List the scenario catalog");
    list->add_flag("--json", as_json, "Print the catalog as JSON");

    std::vector<std::string> configs;
    auto* run = app.add_subcommand("run", "Run scenario configs (JSON or TOML)");
    run->add_option("config", configs, "Config files")->required()->check(CLI::ExistingFile);

    std::string target;
    auto* check = app.add_subcommand("check", "Self-check a scenario, a criterion id, or all");
    check->add_option("scenario", target, "Scenario name, criterion id 1..12, or 'all'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*list) return do_list(as_json);
        if (*run) return do_run(configs);
        if (*check) return do_check(target);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfig;
    }
    return kOk;
}

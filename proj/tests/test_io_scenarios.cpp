#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qwalk/io.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/scenarios.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("qwalk_unit_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.123456789}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv tables") {
    CsvTable t({"t", "pi"});
    t.add_row({0.0, 1.0});
    t.add_row_text({"0.5", "x"});
    CHECK(t.rows() == 2);
    CHECK(t.str() == "t,pi\n0,1\n0.5,x\n");
    CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("toml and json configs map to the same tree") {
    const auto j = parse_toml(R"(
scenario = "ring-lta"
[params]
n = 9
[time]
linspace = [0.0, 1.0, 3]
)");
    CHECK(j["scenario"] == "ring-lta");
    CHECK(j["params"]["n"] == 9);
    CHECK(j["time"]["linspace"][2] == 3);
    CHECK_THROWS_AS(parse_toml("scenario = "), ConfigError);
    const fs::path d = scratch("cfg");
    fs::create_directories(d);
    std::ofstream(d / "a.json") << R"({"scenario": "ring-lta", "params": {"n": 9}, "time": {"linspace": [0.0, 1.0, 3]}})";
    std::ofstream(d / "b.toml") << "scenario = \"ring-lta\"\n[params]\nn = 9\n[time]\nlinspace = [0.0, 1.0, 3]\n";
    CHECK(load_config(d / "a.json") == load_config(d / "b.toml"));
    std::ofstream(d / "bad.json") << "{";
    CHECK_THROWS_AS(load_config(d / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config(d / "missing.json"), ConfigError);
    fs::remove_all(d);
}

TEST_CASE("config hash ignores key order") {
    const auto a = nlohmann::json::parse(R"({"b": 1, "a": [1, 2]})");
    const auto b = nlohmann::json::parse(R"({"a": [1, 2], "b": 1})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    CHECK(config_hash(a) != config_hash(nlohmann::json::parse(R"({"a": [1, 2], "b": 2})")));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("scenario catalog") {
    const auto& all = list_scenarios();
    CHECK(all.size() >= 12);
    std::set<std::string> names;
    std::set<int> criteria;
    for (const auto& s : all) {
        names.insert(s.name);
        if (s.criterion) criteria.insert(s.criterion);
    }
    CHECK(names.size() == all.size());
    CHECK(criteria.size() == 12);
    CHECK_THROWS_AS(find_scenario("nope"), ConfigError);
}

TEST_CASE("config schema errors") {
    CHECK_THROWS_AS(ScenarioConfig::from_json({{"scenario", "ring-lta"}, {"typo", 1}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json({{"scenario", "nope"}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json({{"params", {{"n", 3}}}}), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json({{"scenario", "ring-lta"}, {"params", 3}}), ConfigError);
    ScenarioConfig c = ScenarioConfig::from_json({{"scenario", "ring-lta"}, {"params", {{"size", 9}}}});
    c.output_dir = scratch("schema");
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
    fs::remove_all(c.output_dir);
    CHECK_THROWS_AS(parse_time_grid({{"linspace", {0.0, 1.0}}}), ConfigError);
    CHECK_THROWS_AS(parse_time_grid({{"values", {1.0, 0.5}}}), ConfigError);
    CHECK_THROWS_AS(parse_time_grid({{"linspace", {0, 1, 3}}, {"values", {1.0}}}), ConfigError);
    CHECK(parse_time_grid({{"logspace", {1.0, 100.0, 3}}})[1] == doctest::Approx(10.0));
}

TEST_CASE("runs write a manifest and are byte-identical on rerun") {
    std::vector<ScenarioConfig> cfgs;
    for (const char* sub : {"a", "b"}) {
        ScenarioConfig c = ScenarioConfig::from_json({{"scenario", "ring-lta"}, {"params", {{"n", 9}}}});
        c.output_dir = scratch(std::string("run_") + sub);
        cfgs.push_back(c);
    }
    const auto out = run_scenarios(cfgs);
    REQUIRE(out.size() == 2);
    CHECK(fs::exists(out[0].dir / "manifest.json"));
    // the hash covers the resolved config, output_dir included
    auto ca = out[0].manifest["config"], cb = out[1].manifest["config"];
    ca.erase("output_dir");
    cb.erase("output_dir");
    CHECK(ca == cb);
    CHECK(out[0].manifest["config_hash"] == config_hash(out[0].manifest["config"]));
    CHECK(out[0].manifest["config"]["params"]["n"] == 9);
    CHECK(out[0].files == out[1].files);
    for (const auto& f : out[0].files) CHECK(slurp(out[0].dir / f) == slurp(out[1].dir / f));
    CHECK(!out[0].files.empty());
    for (const auto& c : cfgs) fs::remove_all(c.output_dir);
    // two configs may not share a directory
    cfgs[1].output_dir = cfgs[0].output_dir;
    CHECK_THROWS_AS(run_scenarios(cfgs), ConfigError);
}

TEST_CASE("thread budget honours QWALK_THREADS") {
    setenv("QWALK_THREADS", "3", 1);
    CHECK(thread_budget() == 3);
    setenv("QWALK_THREADS", "0", 1);
    CHECK(thread_budget() >= 1);
    unsetenv("QWALK_THREADS");
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
}

}

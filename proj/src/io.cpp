#include "qwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace qwalk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& row) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_double(v));
    add_row_text(cells);
}

void CsvTable::add_row_text(const std::vector<std::string>& row) {
    if (row.size() != header_.size()) throw std::invalid_argument("csv row width does not match header");
    rows_.push_back(row);
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

namespace {

nlohmann::json to_json(const toml::node& n) {
    if (auto t = n.as_table()) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : *t) j[std::string(k.str())] = to_json(v);
        return j;
    }
    if (auto a = n.as_array()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& v : *a) j.push_back(to_json(v));
        return j;
    }
    if (auto v = n.as_integer()) return v->get();
    if (auto v = n.as_floating_point()) return v->get();
    if (auto v = n.as_boolean()) return v->get();
    if (auto v = n.as_string()) return v->get();
    throw ConfigError("unsupported TOML value (dates and times are not part of the schema)");
}

}  // namespace

nlohmann::json parse_toml(std::string_view text) {
    try {
        return to_json(toml::parse(text));
    } catch (const toml::parse_error& e) {
        throw ConfigError(std::string("TOML parse error: ") + std::string(e.description()));
    }
}

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    if (path.extension() == ".toml") return parse_toml(text);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const nlohmann::json& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(cfg.dump())));
    return buf;
}

}  // namespace qwalk

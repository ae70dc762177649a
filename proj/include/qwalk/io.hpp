#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qwalk {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits, so values round-trip exactly
std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(const std::vector<double>& row);
    // mixed rows: preformatted cells
    void add_row_text(const std::vector<std::string>& row);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// .json or .toml, both mapped to the same JSON tree
nlohmann::json load_config(const std::filesystem::path& path);
nlohmann::json parse_toml(std::string_view text);

// FNV-1a over the canonical dump (keys sorted)
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const nlohmann::json& cfg);

}  // namespace qwalk

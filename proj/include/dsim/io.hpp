#pragma once

#include "dsim/datagen.hpp"
#include "dsim/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dsim {

// Shortest round-trip decimal form; "NA" for missing or non-finite values.
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec spec_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const std::vector<ScenarioSpec>& specs);
std::vector<ScenarioSpec> grid_from_json(const nlohmann::json& j);

// Minimal CSV: comma separated, no quoting (fields never contain commas).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Per-scenario dump with columns (repetition, method, value, error_flag).
void write_dump(const std::filesystem::path& path, const ScenarioResult& r);
ScenarioResult read_dump(const std::filesystem::path& path, const ScenarioSpec& spec);

}  // namespace dsim

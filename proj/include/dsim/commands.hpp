#pragma once

#include "dsim/bench.hpp"
#include "dsim/datagen.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dsim {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissingNull = 3;

struct RunConfig {
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::string> methods;
  int reps = 500;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  int jobs = 1;
  std::vector<std::pair<int, int>> bench_grid;
  BenchOptions bench;
};

// Values given on the command line take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> jobs;
  std::optional<std::filesystem::path> out;
};

// Reads a JSON run configuration. Scenarios come from "scenarios" (inline
// array), "scenario_file" (path relative to the config) or "grid" (a grid
// case name, with "grid_scale" desk or full). "methods" is a list of ids or
// "all". Throws ConfigError on any inconsistency, including a missing seed.
RunConfig load_config(const std::filesystem::path& path, const Overrides& ov = {});
// Resolves and checks a parsed configuration.
RunConfig resolve_config(const nlohmann::json& j, const std::filesystem::path& base, const Overrides& ov);

// One dump CSV per scenario plus an index (scenarios.json).
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
// pesr.csv, meandiff.csv, acceptable.csv, cover.json, tree.json.
int cmd_report(const std::filesystem::path& dump_dir, const std::filesystem::path& out_dir, std::ostream& log);
// bench.csv and bench_summary.csv.
int cmd_bench(const RunConfig& cfg, std::ostream& log);
// Writes a scenario grid as JSON.
int cmd_grid(const std::string& grid_case, const std::string& scale, const std::filesystem::path& out,
             std::ostream& log);

}  // namespace dsim

#include "dsim/commands.hpp"

#include "dsim/harness.hpp"
#include "dsim/io.hpp"
#include "dsim/registry.hpp"

#include <cstdio>
#include <ostream>
#include <set>

namespace dsim {

namespace fs = std::filesystem;

namespace {

std::uint64_t parse_seed(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("seed must be a non-negative integer");
}

std::string dump_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scenario_%04zu.csv", i);
  return buf;
}

}  // namespace

RunConfig resolve_config(const nlohmann::json& j, const fs::path& base, const Overrides& ov) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("scenarios")) {
      cfg.scenarios = grid_from_json(j.at("scenarios"));
    } else if (j.contains("scenario_file")) {
      cfg.scenarios = grid_from_json(read_json(base / j.at("scenario_file").get<std::string>()));
    } else if (j.contains("grid")) {
      const auto scale = j.value("grid_scale", std::string("desk"));
      if (scale != "desk" && scale != "full") throw ConfigError("grid_scale must be desk or full");
      cfg.scenarios = scenario_grid(parse_grid_case(j.at("grid").get<std::string>()),
                                    scale == "full" ? GridScale::Full : GridScale::Desk);
    } else if (!j.contains("bench")) {
      throw ConfigError("config needs scenarios, scenario_file or grid");
    }
    cfg.reps = j.value("reps", 500);
    cfg.jobs = j.value("jobs", 1);
    if (j.contains("out")) cfg.out = base / j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = parse_seed(j.at("seed"));

    int k = 2;
    if (!cfg.scenarios.empty()) {
      k = cfg.scenarios.front().k();
      for (const auto& s : cfg.scenarios)
        if (s.k() != k) throw ConfigError("all scenarios of a run must have the same number of samples");
    }
    const auto& m = j.contains("methods") ? j.at("methods") : nlohmann::json("all");
    if (m.is_string() && m.get<std::string>() == "all") {
      cfg.methods = methods_for_k(k);
    } else if (m.is_array()) {
      for (const auto& id : m) cfg.methods.push_back(id.get<std::string>());
    } else {
      throw ConfigError("methods must be \"all\" or a list of ids");
    }
    std::set<std::string> seen;
    for (const auto& id : cfg.methods) {
      const auto* info = find_method(id);
      if (!info) throw ConfigError("unknown method: " + id);
      if (!applicable(*info, k)) throw ConfigError("method " + id + " does not apply to k = " + std::to_string(k));
      if (!seen.insert(id).second) throw ConfigError("duplicate method: " + id);
    }

    if (j.contains("bench")) {
      const auto& b = j.at("bench");
      for (const auto& cell : b.at("grid")) cfg.bench_grid.emplace_back(cell.at(0).get<int>(), cell.at(1).get<int>());
      cfg.bench.min_reps = b.value("min_reps", 10);
      cfg.bench.min_seconds = b.value("min_seconds", 1.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (ov.seed) cfg.seed = ov.seed;
  if (ov.reps) cfg.reps = *ov.reps;
  if (ov.jobs) cfg.jobs = *ov.jobs;
  if (ov.out) cfg.out = *ov.out;
  if (!cfg.seed) throw ConfigError("a seed is required (config \"seed\" or --seed)");
  if (cfg.reps < 1) throw ConfigError("reps must be positive");
  if (cfg.jobs < 1) throw ConfigError("jobs must be positive");
  if (cfg.bench.min_reps < 1 || cfg.bench.min_seconds < 0) throw ConfigError("invalid bench settings");
  return cfg;
}

RunConfig load_config(const fs::path& path, const Overrides& ov) {
  return resolve_config(read_json(path), path.parent_path(), ov);
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  if (cfg.scenarios.empty()) throw ConfigError("no scenarios to simulate");
  fs::create_directories(cfg.out);
  nlohmann::json index{{"methods", cfg.methods}, {"reps", cfg.reps}, {"seed", *cfg.seed}};
  auto list = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
    const auto& spec = cfg.scenarios[i];
    const auto res = run_scenario(spec, cfg.methods, cfg.reps, *cfg.seed, cfg.jobs);
    const auto name = dump_name(i);
    write_dump(cfg.out / name, res);
    list.push_back({{"file", name}, {"id", spec.id()}, {"spec", to_json(spec)}});
    log << "[" << (i + 1) << "/" << cfg.scenarios.size() << "] " << spec.id() << '\n';
  }
  index["scenarios"] = list;
  write_json(cfg.out / "scenarios.json", index);
  return kExitOk;
}

namespace {

std::vector<std::string> spec_cells(const ScenarioSpec& s) {
  return {s.id(),       to_string(s.dgp),        to_string(s.deviation),
          format_number(s.magnitude), std::to_string(s.N), std::to_string(s.p),
          s.balance_label(), to_string(s.grouping), s.with_target ? "1" : "0"};
}

const std::vector<std::string> kSpecHeader{"scenario", "dgp",     "deviation", "magnitude", "N",
                                            "p",        "balance", "grouping",  "with_target"};

nlohmann::json tree_json(const ChoiceTree& ct, int node) {
  const auto& nd = ct.tree.nodes[static_cast<std::size_t>(node)];
  if (nd.feature < 0) {
    nlohmann::json leaf{{"method", ct.classes[static_cast<std::size_t>(nd.prediction)]}};
    for (const auto& l : ct.leaves)
      if (l.node == node) {
        leaf["cells"] = l.cells;
        leaf["coverage"] = l.coverage;
      }
    return leaf;
  }
  return nlohmann::json{{"feature", ct.features[static_cast<std::size_t>(nd.feature)]},
                        {"threshold", nd.threshold},
                        {"left", tree_json(ct, nd.left)},
                        {"right", tree_json(ct, nd.right)}};
}

}  // namespace

int cmd_report(const fs::path& dump_dir, const fs::path& out_dir, std::ostream& log) {
  const auto index = read_json(dump_dir / "scenarios.json");
  std::vector<ScenarioResult> results;
  try {
    for (const auto& e : index.at("scenarios"))
      results.push_back(read_dump(dump_dir / e.at("file").get<std::string>(), spec_from_json(e.at("spec"))));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid dump index: ") + e.what());
  }
  PesrTable table;
  try {
    table = build_pesr_table(results);
  } catch (const MissingNull& e) {
    log << "error: " << e.what() << '\n';
    return kExitMissingNull;
  }
  if (table.methods.empty() && !results.empty()) table.methods = results.front().methods;
  fs::create_directories(out_dir);
  if (table.rows.empty()) log << "warning: no alternative scenarios in " << dump_dir.string() << '\n';

  auto header = kSpecHeader;
  header.insert(header.end(), table.methods.begin(), table.methods.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows) {
    auto row = spec_cells(r.spec);
    for (const auto& c : r.cells) row.push_back(format_number(c));
    rows.push_back(std::move(row));
  }
  write_csv(out_dir / "pesr.csv", header, rows);

  const auto diffs = mean_diff_to_ideal(table);
  std::vector<std::string> mheader{"scenario"};
  mheader.insert(mheader.end(), table.methods.begin(), table.methods.end());
  rows.clear();
  for (std::size_t s = 0; s < diffs.scenarios.size(); ++s) {
    std::vector<std::string> row{diffs.scenarios[s]};
    for (double v : diffs.diff[s]) row.push_back(format_number(v));
    rows.push_back(std::move(row));
  }
  write_csv(out_dir / "meandiff.csv", mheader, rows);

  const auto cov = acceptable(diffs);
  rows.clear();
  for (std::size_t s = 0; s < cov.scenarios.size(); ++s) {
    std::vector<std::string> row{cov.scenarios[s]};
    for (bool b : cov.covered[s]) row.push_back(b ? "1" : "0");
    rows.push_back(std::move(row));
  }
  write_csv(out_dir / "acceptable.csv", mheader, rows);

  auto steps = nlohmann::json::array();
  if (!cov.scenarios.empty())
    for (const auto& st : greedy_cover(cov, diffs))
      steps.push_back({{"method", st.method}, {"newly_covered", st.newly_covered}, {"cumulative", st.cumulative}});
  write_json(out_dir / "cover.json", nlohmann::json{{"scenarios", cov.scenarios.size()}, {"steps", steps}});

  nlohmann::json tree = nullptr;
  if (!cov.scenarios.empty()) {
    const auto ct = choice_tree(cov, diffs);
    tree = tree_json(ct, 0);
  }
  write_json(out_dir / "tree.json", nlohmann::json{{"features", {"N", "p", "balance"}}, {"root", tree}});
  log << "report: " << table.rows.size() << " alternative scenarios, " << table.methods.size() << " methods\n";
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& log) {
  if (cfg.bench_grid.empty()) throw ConfigError("bench needs a \"bench\": {\"grid\": [[N, p], ...]} entry");
  if (cfg.methods.empty()) throw ConfigError("bench needs at least one method");
  const auto res = bench(cfg.methods, cfg.bench_grid, *cfg.seed, cfg.bench);
  fs::create_directories(cfg.out);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : res.cells)
    rows.push_back({c.method, std::to_string(c.N), std::to_string(c.p), std::to_string(c.runs),
                    format_number(c.total_seconds), format_number(c.median_seconds), format_number(c.scaled)});
  write_csv(cfg.out / "bench.csv", {"method", "N", "p", "runs", "total_seconds", "median_seconds", "scaled"}, rows);
  rows.clear();
  for (const auto& [m, v] : res.summary) rows.push_back({m, format_number(v)});
  write_csv(cfg.out / "bench_summary.csv", {"method", "median_scaled"}, rows);
  log << "bench: " << res.cells.size() << " cells\n";
  return kExitOk;
}

int cmd_grid(const std::string& grid_case, const std::string& scale, const fs::path& out, std::ostream& log) {
  if (scale != "desk" && scale != "full") throw ConfigError("scale must be desk or full");
  const auto specs = scenario_grid(parse_grid_case(grid_case), scale == "full" ? GridScale::Full : GridScale::Desk);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_json(out, grid_to_json(specs));
  log << specs.size() << " scenarios written to " << out.string() << '\n';
  return kExitOk;
}

}  // namespace dsim

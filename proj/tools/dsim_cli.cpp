#include "dsim/commands.hpp"
#include "dsim/core.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Multivariate dataset-similarity statistics: simulation, reporting and benchmarks"};
  app.require_subcommand(1);

  std::string config;
  dsim::Overrides ov;
  std::uint64_t seed = 0;
  int reps = 0, jobs = 0;
  std::string out;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Master seed (overrides the config)");
    cmd->add_option("--reps", reps, "Repetitions per scenario (overrides the config)")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "Output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "Run scenarios and write per-scenario statistic dumps");
  add_run_flags(simulate);
  auto* bench = app.add_subcommand("bench", "Benchmark method runtimes");
  add_run_flags(bench);

  std::string dump_dir;
  auto* report = app.add_subcommand("report", "Aggregate dumps into PESR, ranking, cover and tree outputs");
  report->add_option("dumps", dump_dir, "Directory written by simulate")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out, "Output directory (default: the dump directory)");

  std::string grid_case, scale = "desk";
  auto* grid = app.add_subcommand("grid", "Write a scenario grid as JSON");
  grid->add_option("case", grid_case, "two_sample, two_sample_target or four_sample")->required();
  grid->add_option("--scale", scale, "desk or full");
  grid->add_option("--out", out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsim::kExitConfig;
  }

  try {
    auto fill_overrides = [&](CLI::App* cmd) {
      if (cmd->count("--seed")) ov.seed = seed;
      if (cmd->count("--reps")) ov.reps = reps;
      if (cmd->count("--jobs")) ov.jobs = jobs;
      if (cmd->count("--out")) ov.out = out;
    };
    if (simulate->parsed()) {
      fill_overrides(simulate);
      return dsim::cmd_simulate(dsim::load_config(config, ov), std::cerr);
    }
    if (bench->parsed()) {
      fill_overrides(bench);
      return dsim::cmd_bench(dsim::load_config(config, ov), std::cerr);
    }
    if (report->parsed()) return dsim::cmd_report(dump_dir, out.empty() ? dump_dir : out, std::cerr);
    if (grid->parsed()) return dsim::cmd_grid(grid_case, scale, out, std::cerr);
  } catch (const dsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return dsim::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dsim::kExitFailure;
  }
  return dsim::kExitFailure;
}

#include "dsim/bench.hpp"

#include "dsim/datagen.hpp"
#include "dsim/harness.hpp"
#include "dsim/registry.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace dsim {

std::vector<double> minmax_scale(const std::vector<double>& r) {
  std::vector<double> out(r.size(), 0.0);
  if (r.empty()) return out;
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = (r[i] - *lo) / span;
  // Pin the extremes exactly.
  out[static_cast<std::size_t>(lo - r.begin())] = 0.0;
  out[static_cast<std::size_t>(hi - r.begin())] = 1.0;
  return out;
}

BenchResult bench(std::vector<std::string> methods, const std::vector<std::pair<int, int>>& grid,
                  std::uint64_t seed, const BenchOptions& opt) {
  for (const auto& m : methods)
    if (!find_method(m)) throw ConfigError("unknown method: " + m);
  std::sort(methods.begin(), methods.end());
  using clock = std::chrono::steady_clock;
  BenchResult res;
  std::map<std::string, std::vector<double>> scaled_by_method;
  auto sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  for (const auto& [N, p] : sorted_grid) {
    ScenarioSpec spec;
    spec.N = N;
    spec.p = p;
    validate(spec);
    const auto ms = sample_scenario(spec, derive_seed(seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(p)));
    std::vector<BenchCell> row;
    for (const auto& m : methods) {
      BenchCell cell;
      cell.method = m;
      cell.N = N;
      cell.p = p;
      std::vector<double> times;
      while (cell.runs < opt.min_reps || cell.total_seconds < opt.min_seconds) {
        EvalContext ctx(ms, seed);
        const auto t0 = clock::now();
        (void)evaluate(m, ctx);
        const double dt = std::chrono::duration<double>(clock::now() - t0).count();
        times.push_back(dt);
        cell.total_seconds += dt;
        ++cell.runs;
      }
      cell.median_seconds = quantile(times, 0.5);
      row.push_back(cell);
    }
    std::vector<double> med;
    for (const auto& c : row) med.push_back(c.median_seconds);
    const auto sc = minmax_scale(med);
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i].scaled = sc[i];
      scaled_by_method[row[i].method].push_back(sc[i]);
      res.cells.push_back(row[i]);
    }
  }
  for (const auto& [m, v] : scaled_by_method) res.summary.emplace_back(m, quantile(v, 0.5));
  return res;
}

}  // namespace dsim

#include "dsim/harness.hpp"

#include "dsim/registry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace dsim {

std::vector<double> ScenarioResult::column(std::size_t m) const {
  std::vector<double> v;
  v.reserve(values.size());
  for (const auto& row : values) v.push_back(row[m]);
  return v;
}

int ScenarioResult::invalid_count(std::size_t m) const {
  int c = 0;
  for (const auto& row : values) c += !std::isfinite(row[m]);
  return c;
}

std::uint64_t repetition_seed(std::uint64_t master, const ScenarioSpec& spec, int r) {
  return derive_seed(master, hash_string(spec.id()), static_cast<std::uint64_t>(r));
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& methods, int reps,
                            std::uint64_t seed, int jobs) {
  for (const auto& m : methods)
    if (!find_method(m)) throw ConfigError("unknown method: " + m);
  validate(spec);
  ScenarioResult res;
  res.spec = spec;
  res.methods = methods;
  res.reps = reps;
  res.values.assign(static_cast<std::size_t>(reps), std::vector<double>(methods.size(), NAN));
  res.errors.assign(static_cast<std::size_t>(reps), std::vector<std::string>(methods.size()));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < reps; r = next++) {
      const std::uint64_t s = repetition_seed(seed, spec, r);
      const auto ms = sample_scenario(spec, s);
      EvalContext ctx(ms, derive_seed(s, hash_string("methods")));
      auto& vals = res.values[static_cast<std::size_t>(r)];
      auto& errs = res.errors[static_cast<std::size_t>(r)];
      for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto v = evaluate(methods[m], ctx);
        if (v.valid())
          vals[m] = v.value;
        else
          errs[m] = v.error.value_or("invalid value");
      }
    }
  };
  const int n_workers = std::max(1, std::min(jobs, reps));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return res;
}

double quantile(std::vector<double> v, double q) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

bool too_many_invalid(int invalid, int reps) { return 5 * invalid > reps; }

namespace {

int count_invalid(const std::vector<double>& v) {
  return static_cast<int>(std::count_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }));
}

}  // namespace

std::optional<double> null_threshold(const std::vector<double>& null_values, Direction dir) {
  const int reps = static_cast<int>(null_values.size());
  const int invalid = count_invalid(null_values);
  if (reps == 0 || invalid == reps || too_many_invalid(invalid, reps)) return std::nullopt;
  return quantile(null_values, dir == Direction::Dissimilarity ? 0.95 : 0.05);
}

std::optional<double> pesr_against(double threshold, const std::vector<double>& alt_values, Direction dir) {
  const int reps = static_cast<int>(alt_values.size());
  const int invalid = count_invalid(alt_values);
  if (reps == 0 || invalid == reps || too_many_invalid(invalid, reps)) return std::nullopt;
  int extreme = 0;
  for (double v : alt_values) {
    if (!std::isfinite(v)) continue;
    extreme += dir == Direction::Dissimilarity ? v > threshold : v < threshold;
  }
  return static_cast<double>(extreme) / static_cast<double>(reps - invalid);
}

std::optional<double> pesr(const std::vector<double>& null_values, const std::vector<double>& alt_values,
                           Direction dir) {
  const auto t = null_threshold(null_values, dir);
  if (!t) return std::nullopt;
  return pesr_against(*t, alt_values, dir);
}

PesrTable build_pesr_table(const std::vector<ScenarioResult>& results) {
  PesrTable t;
  if (results.empty()) return t;
  t.methods = results.front().methods;
  std::map<std::string, const ScenarioResult*> nulls;
  for (const auto& r : results) {
    if (r.methods != t.methods) throw ConfigError("scenario results disagree on the method list");
    if (r.spec.deviation == Deviation::Null) nulls[r.spec.null_key()] = &r;
  }
  std::vector<Direction> dirs;
  for (const auto& m : t.methods) dirs.push_back(direction_of(m));
  for (const auto& r : results) {
    if (r.spec.deviation == Deviation::Null) continue;
    const auto it = nulls.find(r.spec.null_key());
    if (it == nulls.end()) throw MissingNull("no null scenario for " + r.spec.id());
    PesrRow row;
    row.spec = r.spec;
    for (std::size_t m = 0; m < t.methods.size(); ++m)
      row.cells.push_back(pesr(it->second->column(m), r.column(m), dirs[m]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

double DiffTable::method_mean(std::size_t m) const {
  if (diff.empty()) return 0.0;
  double s = 0.0;
  for (const auto& row : diff) s += row[m];
  return s / static_cast<double>(diff.size());
}

DiffTable mean_diff_to_ideal(const PesrTable& table) {
  DiffTable d;
  d.methods = table.methods;
  const std::size_t nm = table.methods.size();
  std::map<std::string, std::size_t> index;
  std::vector<int> counts;
  for (const auto& row : table.rows) {
    const auto key = row.spec.family_key();
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, d.scenarios.size()).first;
      d.scenarios.push_back(key);
      d.specs.push_back(row.spec);
      d.diff.emplace_back(nm, 0.0);
      counts.push_back(0);
    }
    double best = -1.0;
    for (const auto& c : row.cells)
      if (c) best = std::max(best, *c);
    auto& acc = d.diff[it->second];
    for (std::size_t m = 0; m < nm; ++m) acc[m] += row.cells[m] ? best - *row.cells[m] : 1.0;
    ++counts[it->second];
  }
  for (std::size_t s = 0; s < d.diff.size(); ++s)
    for (auto& v : d.diff[s]) v /= counts[s];
  return d;
}

CoverageMatrix acceptable(const DiffTable& diffs, double margin) {
  CoverageMatrix c;
  c.methods = diffs.methods;
  c.scenarios = diffs.scenarios;
  c.specs = diffs.specs;
  for (const auto& row : diffs.diff) {
    const double best = row.empty() ? 0.0 : *std::min_element(row.begin(), row.end());
    std::vector<bool> cov;
    // The small slack keeps cutoffs such as 0.02 + 0.1 inclusive in floating point.
    for (double v : row) cov.push_back(v <= best + margin + 1e-12);
    c.covered.push_back(std::move(cov));
  }
  return c;
}

std::vector<CoverStep> greedy_cover(const CoverageMatrix& cov, const std::vector<double>& tie_scores) {
  const std::size_t ns = cov.scenarios.size(), nm = cov.methods.size();
  std::vector<bool> done(ns, false), used(nm, false);
  std::vector<CoverStep> out;
  int total = 0;
  while (true) {
    int best = -1, best_gain = -1;
    for (std::size_t m = 0; m < nm; ++m) {
      if (used[m]) continue;
      int gain = 0;
      for (std::size_t s = 0; s < ns; ++s) gain += !done[s] && cov.covered[s][m];
      const bool better =
          best < 0 || gain > best_gain ||
          (gain == best_gain && (tie_scores[m] < tie_scores[static_cast<std::size_t>(best)] ||
                                 (tie_scores[m] == tie_scores[static_cast<std::size_t>(best)] &&
                                  cov.methods[m] < cov.methods[static_cast<std::size_t>(best)])));
      if (better) {
        best = static_cast<int>(m);
        best_gain = gain;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    for (std::size_t s = 0; s < ns; ++s)
      if (cov.covered[s][static_cast<std::size_t>(best)]) done[s] = true;
    total += best_gain;
    out.push_back({cov.methods[static_cast<std::size_t>(best)], best_gain,
                   static_cast<double>(total) / static_cast<double>(ns)});
  }
  return out;
}

std::vector<CoverStep> greedy_cover(const CoverageMatrix& cov, const DiffTable& diffs) {
  std::vector<double> tie;
  for (std::size_t m = 0; m < diffs.methods.size(); ++m) tie.push_back(diffs.method_mean(m));
  return greedy_cover(cov, tie);
}

Eigen::RowVectorXd choice_features(const ScenarioSpec& spec) {
  Eigen::RowVectorXd f(3);
  f << spec.N, spec.p, *std::min_element(spec.proportions.begin(), spec.proportions.end());
  return f;
}

ChoiceTree choice_tree(const CoverageMatrix& cov, const DiffTable& diffs) {
  ChoiceTree ct;
  const std::size_t nm = cov.methods.size();
  // Cells keyed by their feature vector, in first-seen order.
  std::vector<Eigen::RowVectorXd> cell_features;
  std::vector<std::vector<std::size_t>> cell_scenarios;
  for (std::size_t s = 0; s < cov.specs.size(); ++s) {
    const auto f = choice_features(cov.specs[s]);
    std::size_t c = 0;
    while (c < cell_features.size() && cell_features[c] != f) ++c;
    if (c == cell_features.size()) {
      cell_features.push_back(f);
      cell_scenarios.emplace_back();
    }
    cell_scenarios[c].push_back(s);
  }
  if (cell_features.empty()) return ct;

  std::vector<double> means;
  for (std::size_t m = 0; m < nm; ++m) means.push_back(diffs.method_mean(m));
  std::vector<int> cell_method;
  for (const auto& ss : cell_scenarios) {
    int best = 0, best_count = -1;
    for (std::size_t m = 0; m < nm; ++m) {
      int count = 0;
      for (auto s : ss) count += cov.covered[s][m];
      const auto b = static_cast<std::size_t>(best);
      if (count > best_count ||
          (count == best_count && (means[m] < means[b] || (means[m] == means[b] && cov.methods[m] < cov.methods[b])))) {
        best = static_cast<int>(m);
        best_count = count;
      }
    }
    cell_method.push_back(best);
  }

  // Class indices over the methods that label some cell, sorted by id.
  std::set<std::string> names;
  for (int m : cell_method) names.insert(cov.methods[static_cast<std::size_t>(m)]);
  ct.classes.assign(names.begin(), names.end());
  auto class_of = [&](int m) {
    return static_cast<int>(std::find(ct.classes.begin(), ct.classes.end(), cov.methods[static_cast<std::size_t>(m)]) -
                            ct.classes.begin());
  };
  DataMatrix x(static_cast<Eigen::Index>(cell_features.size()), 3);
  Labels y;
  for (std::size_t c = 0; c < cell_features.size(); ++c) {
    x.row(static_cast<Eigen::Index>(c)) = cell_features[c];
    y.push_back(class_of(cell_method[c]));
  }
  CartParams grow_to_purity;
  grow_to_purity.max_depth = 64;
  grow_to_purity.min_leaf = 1;
  grow_to_purity.grow_to_purity = true;
  ct.tree = cart_fit(x, y, static_cast<int>(ct.classes.size()), grow_to_purity);

  std::map<int, std::pair<int, int>> leaf_cov;  // leaf -> (covered, scenarios)
  std::map<int, int> leaf_cells;
  for (std::size_t c = 0; c < cell_features.size(); ++c) {
    const int leaf = ct.tree.leaf_of(cell_features[c]);
    const auto& name = ct.classes[static_cast<std::size_t>(ct.tree.nodes[static_cast<std::size_t>(leaf)].prediction)];
    const auto m = static_cast<std::size_t>(std::find(cov.methods.begin(), cov.methods.end(), name) - cov.methods.begin());
    auto& lc = leaf_cov[leaf];
    for (auto s : cell_scenarios[c]) {
      lc.first += cov.covered[s][m];
      ++lc.second;
    }
    ++leaf_cells[leaf];
  }
  for (std::size_t i = 0; i < ct.tree.nodes.size(); ++i) {
    const auto& nd = ct.tree.nodes[i];
    if (nd.feature >= 0) continue;
    ChoiceLeaf leaf;
    leaf.node = static_cast<int>(i);
    leaf.method = ct.classes[static_cast<std::size_t>(nd.prediction)];
    const auto it = leaf_cov.find(leaf.node);
    leaf.cells = leaf_cells[leaf.node];
    leaf.coverage = it == leaf_cov.end() || it->second.second == 0
                        ? 0.0
                        : static_cast<double>(it->second.first) / it->second.second;
    ct.leaves.push_back(leaf);
  }
  return ct;
}

}  // namespace dsim

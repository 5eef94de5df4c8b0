#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dsim {

struct BenchOptions {
  int min_reps = 10;
  double min_seconds = 1.0;
};

struct BenchCell {
  std::string method;
  int N = 0;
  int p = 0;
  int runs = 0;
  double total_seconds = 0.0;
  double median_seconds = 0.0;
  double scaled = 0.0;
};

struct BenchResult {
  // Sorted by (N, p, method).
  std::vector<BenchCell> cells;
  // Per method (sorted by id): median of its scaled runtimes.
  std::vector<std::pair<std::string, double>> summary;
};

// (r - min) / (max - min) over one row; all zeros when max == min.
std::vector<double> minmax_scale(const std::vector<double>& r);

// Median runtime of every method on balanced normal null data of each (N, p)
// cell. A method is rerun until it has at least `min_reps` runs and
// `min_seconds` of cumulative runtime; every run starts from a fresh cache.
BenchResult bench(std::vector<std::string> methods, const std::vector<std::pair<int, int>>& grid,
                  std::uint64_t seed, const BenchOptions& opt = {});

}  // namespace dsim

#pragma once

#include "dsim/classifier.hpp"
#include "dsim/core.hpp"
#include "dsim/datagen.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dsim {

// Statistic values of every (repetition, method) cell of one scenario.
struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<std::string> methods;
  int reps = 0;
  // values[r][m]; NaN where the statistic failed.
  std::vector<std::vector<double>> values;
  // errors[r][m]; empty when the statistic succeeded.
  std::vector<std::vector<std::string>> errors;

  std::vector<double> column(std::size_t m) const;
  int invalid_count(std::size_t m) const;
};

// Seed of repetition r of a scenario.
std::uint64_t repetition_seed(std::uint64_t master, const ScenarioSpec& spec, int r);

// R independent draws, every method on every draw. Repetitions run on `jobs`
// worker threads and are merged by repetition index.
ScenarioResult run_scenario(const ScenarioSpec& spec, const std::vector<std::string>& methods, int reps,
                            std::uint64_t seed, int jobs = 1);

// Linear-interpolation sample quantile of the finite values.
double quantile(std::vector<double> v, double q);

// A column is missing when more than a fifth of its repetitions are invalid.
bool too_many_invalid(int invalid, int reps);

// Threshold of the valid null values: 95% quantile for dissimilarities, 5%
// quantile for similarities. Missing under the invalid-repetition rule.
std::optional<double> null_threshold(const std::vector<double>& null_values, Direction dir);

// Share of valid alternative values strictly beyond the threshold.
std::optional<double> pesr_against(double threshold, const std::vector<double>& alt_values, Direction dir);
std::optional<double> pesr(const std::vector<double>& null_values, const std::vector<double>& alt_values,
                           Direction dir);

struct PesrRow {
  ScenarioSpec spec;
  std::vector<std::optional<double>> cells;
};

struct PesrTable {
  std::vector<std::string> methods;
  std::vector<PesrRow> rows;
};

// Raised when an alternative has no null scenario with the same null key.
class MissingNull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row per alternative scenario, thresholded against the null scenario
// sharing its null key. All results must carry the same method list.
PesrTable build_pesr_table(const std::vector<ScenarioResult>& results);

// Mean over magnitudes of (best PESR - PESR), missing cells counting 1.
struct DiffTable {
  std::vector<std::string> methods;
  std::vector<std::string> scenarios;  // family keys
  std::vector<ScenarioSpec> specs;     // one representative per family
  // diff[s][m]
  std::vector<std::vector<double>> diff;

  double method_mean(std::size_t m) const;
};

DiffTable mean_diff_to_ideal(const PesrTable& table);

struct CoverageMatrix {
  std::vector<std::string> methods;
  std::vector<std::string> scenarios;
  std::vector<ScenarioSpec> specs;
  // covered[s][m]
  std::vector<std::vector<bool>> covered;
};

// Method acceptable iff its diff is at most the scenario minimum + margin.
CoverageMatrix acceptable(const DiffTable& diffs, double margin = 0.1);

struct CoverStep {
  std::string method;
  int newly_covered = 0;
  double cumulative = 0.0;
};

// Greedy set cover. Ties go to the lower tie score, then the lower id.
// Every method is listed; those adding nothing come last.
std::vector<CoverStep> greedy_cover(const CoverageMatrix& cov, const std::vector<double>& tie_scores);
std::vector<CoverStep> greedy_cover(const CoverageMatrix& cov, const DiffTable& diffs);

struct ChoiceLeaf {
  int node = 0;
  std::string method;
  int cells = 0;
  // Share of the leaf's scenarios covered by its method.
  double coverage = 0.0;
};

struct ChoiceTree {
  Tree tree;
  std::vector<std::string> features{"N", "p", "balance"};
  std::vector<std::string> classes;
  std::vector<ChoiceLeaf> leaves;
};

// Feature vector (N, p, smallest proportion) of a scenario.
Eigen::RowVectorXd choice_features(const ScenarioSpec& spec);

// Per (N, p, balance) cell the method covering most of the cell's scenarios
// (ties: lower mean diff, then id); a CART tree grown to purity on the cells.
ChoiceTree choice_tree(const CoverageMatrix& cov, const DiffTable& diffs);

}  // namespace dsim

#pragma once

#include "dsim/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dsim {

enum class Dgp { Normal, T3, LogNormal, ChiSq1 };

enum class Deviation {
  Null,
  Shift,
  Scale,
  Correlation,
  Kurtosis,
  NormalVsT,
  SkewKurtosis,
  OgmSign,
  OgmSize,
  OgmDifferent
};

// How many of the k distributions differ. For k = 2 only G1_1 is valid.
enum class Grouping { G1_1, G3_1, G2_2, G2_1_1, G1_1_1_1 };

enum class GridCase { TwoSample, TwoSampleTarget, FourSample };
enum class GridScale { Desk, Full };

const char* to_string(Dgp d);
const char* to_string(Deviation d);
const char* to_string(Grouping g);
const char* to_string(GridCase c);
Dgp parse_dgp(const std::string& s);
Deviation parse_deviation(const std::string& s);
Grouping parse_grouping(const std::string& s);
GridCase parse_grid_case(const std::string& s);

bool is_ogm(Deviation d);

// One simulation scenario.
//
// `magnitude` is the deviation parameter: delta (shift), s (scale), rho
// (correlation), the t degrees of freedom (normal_vs_t), and for kurtosis /
// skew_kurtosis either the deviating degrees of freedom (groupings 1+1, 3+1,
// 2+2) or the increment d (groupings 2+1+1 and 1+1+1+1). OGM deviations
// ignore it.
struct ScenarioSpec {
  Dgp dgp = Dgp::Normal;
  Deviation deviation = Deviation::Null;
  double magnitude = 0.0;
  int N = 100;
  int p = 2;
  std::vector<double> proportions{0.5, 0.5};
  Grouping grouping = Grouping::G1_1;
  bool with_target = false;

  int k() const { return static_cast<int>(proportions.size()); }
  // Canonical, human-readable identifier; used for seeding and file naming.
  std::string id() const;
  // Key shared by an alternative and the null scenario it is thresholded
  // against: (dgp, N, p, proportions, with_target).
  std::string null_key() const;
  // Identifier of the scenario with the magnitude removed (the unit over
  // which mean differences to the ideal method are averaged).
  std::string family_key() const;
  ScenarioSpec null_counterpart() const;
  std::string balance_label() const;
};

// Distribution of a single sample.
struct SampleLaw {
  enum class Family { Normal, T, LogNormal, ChiSq };
  Family family = Family::Normal;
  double shift = 0.0;  // Euclidean length of the mean shift
  double scale = 1.0;  // s; each component gets s^(1/p)
  double rho = 0.0;    // equicorrelation
  double df = 3.0;     // t or chi-square degrees of freedom
};

enum class OgmVariant { Null, Sign, Size, Different };

struct OgmSpec {
  double intercept = -0.5;
  Eigen::VectorXd beta;
  OgmVariant variant = OgmVariant::Null;

  static OgmSpec make(int p, OgmVariant v);
};

// n_i = pi_i * N; throws ConfigError unless every product is integral.
std::vector<int> sample_sizes(const ScenarioSpec& spec);

// Throws ConfigError for inconsistent specs (invalid dgp/deviation pair,
// grouping not matching k, OGM without target, odd p with a target...).
void validate(const ScenarioSpec& spec);

std::vector<SampleLaw> sample_laws(const ScenarioSpec& spec);

// Per-law construction quantities.
Eigen::VectorXd location(const SampleLaw& law, int p);
Eigen::VectorXd component_scale_factors(const SampleLaw& law, int p);
// Normal covariance / t dispersion matrix; identity-based for other families.
Eigen::MatrixXd dispersion(const SampleLaw& law, int p);
Eigen::MatrixXd equicorrelation(double rho, int p);

// Log-normal parameters with unit mean and unit variance per component.
struct LogNormalParams {
  double mu;
  double sigma;
};
LogNormalParams unit_lognormal();

DataMatrix draw(const SampleLaw& law, int n, int p, std::uint64_t seed);

MultiSample sample_scenario(const ScenarioSpec& spec, std::uint64_t seed);

// Bernoulli targets from the logistic model; `degenerate` is set when all
// labels coincide.
Eigen::VectorXi gen_target(const DataMatrix& x, const OgmSpec& ogm, std::uint64_t seed,
                           bool* degenerate = nullptr);

double logistic(double eta);

// Full deviation grid for one (dgp, deviation, k, grouping).
std::vector<double> magnitude_grid(Dgp dgp, Deviation dev, int k, Grouping g);
std::vector<int> n_grid(int k, GridScale scale);
std::vector<int> p_grid(GridScale scale);
std::vector<std::vector<double>> balance_grid(int k);
std::vector<Deviation> deviations_for(Dgp dgp, int k);

// Full-factorial scenario list (nulls first).
std::vector<ScenarioSpec> scenario_grid(GridCase c, GridScale scale = GridScale::Full);

}  // namespace dsim

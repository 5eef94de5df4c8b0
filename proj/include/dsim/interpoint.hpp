#pragma once

#include "dsim/core.hpp"

#include <vector>

namespace dsim {

// Kernels applied to squared distances in the generalized Cramer statistic.
enum class Phi { Cramer, Log, FracA, FracB, Bahr };

const char* to_string(Phi f);

// Cramer: sqrt(x) (the Euclidean distance, i.e. the energy statistic)
// Log:    log(1 + x)
// FracA:  1 - 1/(1 + x)
// FracB:  1 - 1/(1 + x)^2
// Bahr:   1 - exp(-x/2)
double phi(Phi f, double squared_distance);

// Mean of ||a_u - b_v||^alpha over all rows of a and b.
template <typename DA, typename DB>
double g_alpha(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, double alpha) {
  double s = 0.0;
  for (Eigen::Index u = 0; u < a.rows(); ++u)
    for (Eigen::Index v = 0; v < b.rows(); ++v) s += std::pow((a.row(u) - b.row(v)).norm(), alpha);
  return s / static_cast<double>(a.rows() * b.rows());
}

// Mean of f(d) over the block of the pooled distance matrix between samples
// a and b.
template <typename F>
double block_mean(const DistanceMatrix& d, const std::vector<int>& off, int a, int b, F&& f) {
  double s = 0.0;
  for (int i = off[a]; i < off[a + 1]; ++i)
    for (int j = off[b]; j < off[b + 1]; ++j) s += f(d(i, j));
  return s / (static_cast<double>(off[a + 1] - off[a]) * static_cast<double>(off[b + 1] - off[b]));
}

// k-sample energy statistic: sum_{i<j} n_i n_j/(n_i+n_j) (2 g_ij - g_ii - g_jj).
StatValue energy(const MultiSample& ms);
StatValue energy(const DistanceMatrix& d, const std::vector<int>& sizes);

StatValue bf_statistic(const DataMatrix& x1, const DataMatrix& x2, Phi f);
StatValue bf_statistic(const DistanceMatrix& d, const std::vector<int>& sizes, Phi f);

StatValue bg2(const DataMatrix& x1, const DataMatrix& x2);
StatValue bg2(const DistanceMatrix& d, const std::vector<int>& sizes);

struct DiscoResult {
  double total = 0.0;
  double between = 0.0;
  double within = 0.0;
  double f = 0.0;
};

enum class DiscoVariant { F, B };

DiscoResult disco_decompose(const DistanceMatrix& d, const std::vector<int>& sizes, double alpha);
StatValue disco(const MultiSample& ms, double alpha, DiscoVariant v);
StatValue disco(const DistanceMatrix& d, const std::vector<int>& sizes, double alpha, DiscoVariant v);

// Ranks of the pooled sample: assignment of every pooled point to a Halton
// reference point minimizing total squared distance. Row i of the result is
// the reference point assigned to pooled observation i.
DataMatrix rank_map(const DataMatrix& pooled, std::vector<int>* perm = nullptr);
StatValue ds_rank_energy(const DataMatrix& x1, const DataMatrix& x2);

// Exact empirical 1-Wasserstein distance; equal sample sizes only.
StatValue wasserstein1(const DataMatrix& x1, const DataMatrix& x2);
StatValue wasserstein1(const DistanceMatrix& d, const std::vector<int>& sizes);

enum class BallAggregation { Sum, SumMax, Max };
const char* to_string(BallAggregation a);

// Two-sample Ball divergence between samples a and b of the pooled distances.
double ball_divergence_pair(const DistanceMatrix& d, const std::vector<int>& off, int a, int b);
StatValue ball_divergence(const MultiSample& ms, BallAggregation agg = BallAggregation::Sum);
StatValue ball_divergence(const DistanceMatrix& d, const std::vector<int>& sizes,
                          BallAggregation agg = BallAggregation::Sum);

// Plug-in characteristic distance.
StatValue lhz(const DataMatrix& x1, const DataMatrix& x2);

StatValue engineer_metric(const DataMatrix& x1, const DataMatrix& x2, double q = 2.0);

// L1 distance of the empirical measures on a rectangular partition of the
// pooled bounding box. The per-axis count is ceil(N^(eps/p)) so that the
// total cell count is about N^eps.
constexpr double kMaxPartitionCells = 1e7;
int partition_cells_per_axis(int n, int p, double eps);
StatValue bg_partition(const DataMatrix& x1, const DataMatrix& x2, double eps);
StatValue bg_partition_cells(const DataMatrix& x1, const DataMatrix& x2, int cells_per_axis);

}  // namespace dsim

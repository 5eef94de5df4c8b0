#pragma once

#include "dsim/core.hpp"
#include "dsim/graphs.hpp"
#include "dsim/permutation.hpp"

#include <vector>

namespace dsim {

// Within counts on the diagonal, between counts for a < b in the upper
// triangle. Directed K-NN edges count individually.
struct EdgeCounts {
  Eigen::MatrixXd counts;
  double total = 0.0;

  int k() const { return static_cast<int>(counts.rows()); }
  double within(int a) const { return counts(a, a); }
  double between(int a, int b) const { return a < b ? counts(a, b) : counts(b, a); }
  double between_total() const;
};

EdgeCounts edge_counts(const Graph& g, const Labels& labels, int k);

// Coefficients for (R_1..R_k, R^B_{12}, R^B_{13}, ..., R^B_{k-1,k}).
std::vector<Coef> count_coefs(int k);
// Observed vector in the same order.
Eigen::VectorXd count_vector(const EdgeCounts& c);

// Exact permutation moments of the count vector above.
Moments null_moments(const Graph& g, const std::vector<int>& sizes);

enum class EdgeVariant { FR, CF, CCS, ZC };

// FR: standardized between-sample count (similarity).
// CF: Mahalanobis form of (R_1, R_2).
// CCS: standardized R_w = (n1/N) R_1 + (n2/N) R_2.
// ZC: max(kappa Z_w, |Z_d|) with Z_d the standardized R_1 - R_2.
StatValue edgecount_test(const Graph& g, const Labels& labels, EdgeVariant v, double kappa = 1.0);

struct ZcParts {
  double rw = 0.0;   // raw R_w
  double rd = 0.0;   // raw |R_1 - R_2|
  double zw = 0.0;   // standardized R_w
  double zd = 0.0;   // standardized R_1 - R_2
};
ZcParts zc_parts(const Graph& g, const Labels& labels);
// max(kappa R_w, |R_1 - R_2|) on the raw count scale.
double zc_raw(const Graph& g, const Labels& labels, double kappa);

enum class ScVariant { S, SA };
StatValue sc_test(const Graph& g, const Labels& labels, int k, ScVariant v);

// L = (R_1 + R_2) / (K N) on the directed K-NN graph.
StatValue sh_test(const std::vector<std::vector<int>>& order, const Labels& labels, int K);
StatValue sh_test(const DistanceMatrix& d, const Labels& labels, int K);
// Sum over K = 1..N-1 of the within-sample K-NN counts.
StatValue bqs_test(const std::vector<std::vector<int>>& order, const Labels& labels);
StatValue bqs_test(const DistanceMatrix& d, const Labels& labels);

enum class CrossVariant { Rosenbaum, Petrie, Mmcm };
// Cross-match counts a_ab of the matching, a < b.
Eigen::MatrixXd crossmatch_counts(const Matching& m, const Labels& labels, int k);
// Matching as a graph on N nodes (an unmatched node stays isolated).
Graph matching_graph(const Matching& m, int n);
// Pairs entering the MMCM vector.
std::vector<std::pair<int, int>> mmcm_pairs(int k);
StatValue crossmatch(const Matching& m, const Labels& labels, int k, CrossVariant v);
StatValue crossmatch(const DistanceMatrix& d, const Labels& labels, int k, CrossVariant v);

// Graph estimator of the kernel measure of multi-sample dissimilarity with
// the discrete kernel on sample labels.
StatValue kmd(const Graph& g, const Labels& labels, int k);

int label_count(const Labels& labels);
std::vector<int> label_sizes(const Labels& labels, int k);

}  // namespace dsim

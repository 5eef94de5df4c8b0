#pragma once

#include "dsim/core.hpp"
#include "dsim/graphs.hpp"

#include <vector>

namespace dsim {

// Exact moments of pair statistics under the uniform permutation null.
//
// A pair statistic on a weighted graph w (symmetric, zero diagonal) is
//   X_C = sum_{i<j} w_ij C[l_i][l_j]
// for a symmetric k x k coefficient matrix C and labels l drawn uniformly
// from all arrangements with fixed sample sizes. The moments depend on w
// only through the three sums below.
struct PairSums {
  int n = 0;
  double total = 0.0;       // sum_{i<j} w_ij
  double sum_sq = 0.0;      // sum_{i<j} w_ij^2
  double sum_deg_sq = 0.0;  // sum_v (sum_j w_vj)^2
};

// Directed K-NN edges i->j and j->i both count, so a mutual pair has weight 2.
PairSums pair_sums(const Graph& g);
PairSums pair_sums(const Eigen::MatrixXd& w);

using Coef = Eigen::MatrixXd;

double null_mean(const PairSums& s, const std::vector<int>& sizes, const Coef& c);
double null_cov(const PairSums& s, const std::vector<int>& sizes, const Coef& c1, const Coef& c2);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Moments null_moments(const PairSums& s, const std::vector<int>& sizes, const std::vector<Coef>& coefs);

// Coefficient selecting pairs with labels {a, b} (a == b: within sample a).
Coef pair_coef(int k, int a, int b);

// Falling factorial x (x-1) ... (x-m+1).
double falling(double x, int m);

// (x - mean)' pinv(cov) (x - mean); `singular` reports a dropped eigenvalue.
double quadratic_form(const Eigen::VectorXd& x, const Moments& m, bool* singular = nullptr);

}  // namespace dsim

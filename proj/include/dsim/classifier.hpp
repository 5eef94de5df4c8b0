#pragma once

#include "dsim/core.hpp"

#include <cstdint>
#include <vector>

namespace dsim {

// Stratified split: about half of every class goes to training.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};
Split stratified_split(const Labels& labels, int k, std::uint64_t seed);

// Majority vote of the K nearest training points; ties go to the class of
// the nearest tied neighbour.
std::vector<int> knn_predict(const DataMatrix& train_x, const Labels& train_y, int k_classes,
                             const DataMatrix& test_x, int K);

// Accuracy of a K-NN classifier (K = floor(sqrt(n_train))) trained on a
// stratified half of the pooled sample to predict sample membership.
StatValue c2st_knn(const MultiSample& ms, std::uint64_t seed);

struct CartParams {
  int max_depth = 10;
  int min_leaf = 5;
  // Accept zero-gain splits so that every leaf ends up pure.
  bool grow_to_purity = false;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int prediction = 0;
  std::vector<int> counts;
  int depth = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  int classes = 0;

  int predict(const Eigen::RowVectorXd& x) const;
  int leaf_of(const Eigen::RowVectorXd& x) const;
  int leaf_count() const;
};

// CART classification tree with Gini splits (x <= threshold goes left).
Tree cart_fit(const DataMatrix& x, const Labels& y, int classes, const CartParams& params);

// Test-set error of a classification tree on a stratified 50/50 split.
StatValue ymrzl(const MultiSample& ms, std::uint64_t seed);

enum class UnivariateStat { MD, T, AUC };
const char* to_string(UnivariateStat s);

// Mean-difference direction, projection, then a univariate two-sample
// statistic of the projected values.
StatValue diproperm(const DataMatrix& x1, const DataMatrix& x2, UnivariateStat s);

}  // namespace dsim

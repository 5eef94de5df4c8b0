#include "dsim/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dsim {

Split stratified_split(const Labels& labels, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Split s;
  for (int c = 0; c < k; ++c) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) idx.push_back(static_cast<int>(i));
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t half = idx.size() / 2;
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(half));
    s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(half), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<int> knn_predict(const DataMatrix& train_x, const Labels& train_y, int k_classes,
                             const DataMatrix& test_x, int K) {
  const int n = static_cast<int>(train_x.rows());
  K = std::clamp(K, 1, n);
  std::vector<int> out;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < test_x.rows(); ++t) {
    for (int i = 0; i < n; ++i) dist[static_cast<std::size_t>(i)] = (train_x.row(i) - test_x.row(t)).squaredNorm();
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + K, order.end(), [&](int a, int b) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)] ||
             (dist[static_cast<std::size_t>(a)] == dist[static_cast<std::size_t>(b)] && a < b);
    });
    std::vector<int> votes(static_cast<std::size_t>(k_classes), 0);
    for (int r = 0; r < K; ++r) ++votes[static_cast<std::size_t>(train_y[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])])];
    const int top = *std::max_element(votes.begin(), votes.end());
    int pred = -1;
    for (int r = 0; r < K && pred < 0; ++r) {
      const int c = train_y[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
      if (votes[static_cast<std::size_t>(c)] == top) pred = c;
    }
    out.push_back(pred);
  }
  return out;
}

namespace {

DataMatrix rows_of(const DataMatrix& x, const std::vector<int>& idx) {
  DataMatrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
  return out;
}

Labels labels_of(const Labels& y, const std::vector<int>& idx) {
  Labels out;
  for (int i : idx) out.push_back(y[static_cast<std::size_t>(i)]);
  return out;
}

bool all_classes_present(const Labels& y, int k) {
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int l : y) seen[static_cast<std::size_t>(l)] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

StatValue c2st_knn(const MultiSample& ms, std::uint64_t seed) {
  const auto p = pool(ms);
  if (ms.total() < 10) return StatValue::failure("c2st", Direction::Dissimilarity, "need N >= 10");
  if (ms.degenerate_target())
    return StatValue::failure("c2st", Direction::Dissimilarity, "degenerate target");
  const auto s = stratified_split(p.labels, ms.k(), seed);
  const auto ytrain = labels_of(p.labels, s.train);
  if (!all_classes_present(ytrain, ms.k()))
    return StatValue::failure("c2st", Direction::Dissimilarity, "class absent from training split");
  const int K = static_cast<int>(std::floor(std::sqrt(static_cast<double>(s.train.size()))));
  const auto pred = knn_predict(rows_of(p.data, s.train), ytrain, ms.k(), rows_of(p.data, s.test), K);
  double hits = 0.0;
  for (std::size_t i = 0; i < s.test.size(); ++i) hits += pred[i] == p.labels[static_cast<std::size_t>(s.test[i])];
  return StatValue::ok("c2st", hits / static_cast<double>(s.test.size()), Direction::Dissimilarity);
}

int Tree::leaf_of(const Eigen::RowVectorXd& x) const {
  int i = 0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& nd = nodes[static_cast<std::size_t>(i)];
    i = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
  }
  return i;
}

int Tree::predict(const Eigen::RowVectorXd& x) const { return nodes[static_cast<std::size_t>(leaf_of(x))].prediction; }

int Tree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

namespace {

double gini(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double s = 1.0;
  for (int c : counts) {
    const double q = static_cast<double>(c) / total;
    s -= q * q;
  }
  return s;
}

struct Builder {
  const DataMatrix& x;
  const Labels& y;
  int classes;
  CartParams params;
  Tree tree;

  int build(std::vector<int>& idx, int depth) {
    TreeNode node;
    node.depth = depth;
    node.counts.assign(static_cast<std::size_t>(classes), 0);
    for (int i : idx) ++node.counts[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])];
    node.prediction = static_cast<int>(std::max_element(node.counts.begin(), node.counts.end()) - node.counts.begin());
    const int me = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);

    const int n = static_cast<int>(idx.size());
    const double parent = gini(node.counts, n);
    if (depth >= params.max_depth || parent == 0.0 || n < 2 * params.min_leaf) return me;

    double best_gain = params.grow_to_purity ? -1.0 : 1e-12;
    int best_f = -1;
    double best_t = 0.0;
    std::vector<int> order = idx;
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f) || (x(a, f) == x(b, f) && a < b); });
      std::vector<int> left(static_cast<std::size_t>(classes), 0);
      std::vector<int> right = node.counts;
      for (int s = 0; s < n - 1; ++s) {
        const int lab = y[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])];
        ++left[static_cast<std::size_t>(lab)];
        --right[static_cast<std::size_t>(lab)];
        const int nl = s + 1, nr = n - nl;
        const double xv = x(order[static_cast<std::size_t>(s)], f), xn = x(order[static_cast<std::size_t>(s + 1)], f);
        if (xv == xn || nl < params.min_leaf || nr < params.min_leaf) continue;
        const double g = parent - (nl * gini(left, nl) + nr * gini(right, nr)) / n;
        if (g > best_gain) {
          best_gain = g;
          best_f = static_cast<int>(f);
          best_t = 0.5 * (xv + xn);
        }
      }
    }
    if (best_f < 0) return me;
    std::vector<int> li, ri;
    for (int i : idx) (x(i, best_f) <= best_t ? li : ri).push_back(i);
    const int l = build(li, depth + 1);
    const int r = build(ri, depth + 1);
    auto& nd = tree.nodes[static_cast<std::size_t>(me)];
    nd.feature = best_f;
    nd.threshold = best_t;
    nd.left = l;
    nd.right = r;
    return me;
  }
};

}  // namespace

Tree cart_fit(const DataMatrix& x, const Labels& y, int classes, const CartParams& params) {
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) throw DimensionError("labels must match rows");
  if (x.rows() < 1) throw DimensionError("tree needs data");
  Builder b{x, y, classes, params, {}};
  b.tree.classes = classes;
  std::vector<int> idx(y.size());
  std::iota(idx.begin(), idx.end(), 0);
  b.build(idx, 0);
  return b.tree;
}

StatValue ymrzl(const MultiSample& ms, std::uint64_t seed) {
  const auto p = pool(ms);
  if (ms.total() < 10) return StatValue::failure("ymrzl", Direction::Similarity, "need N >= 10");
  if (ms.degenerate_target())
    return StatValue::failure("ymrzl", Direction::Similarity, "degenerate target");
  const auto s = stratified_split(p.labels, ms.k(), seed);
  const auto ytrain = labels_of(p.labels, s.train);
  const auto tree = cart_fit(rows_of(p.data, s.train), ytrain, ms.k(), CartParams{});
  double wrong = 0.0;
  for (int i : s.test) wrong += tree.predict(p.data.row(i)) != p.labels[static_cast<std::size_t>(i)];
  return StatValue::ok("ymrzl", wrong / static_cast<double>(s.test.size()), Direction::Similarity);
}

const char* to_string(UnivariateStat s) {
  switch (s) {
    case UnivariateStat::MD: return "MD";
    case UnivariateStat::T: return "t";
    case UnivariateStat::AUC: return "AUC";
  }
  return "?";
}

StatValue diproperm(const DataMatrix& x1, const DataMatrix& x2, UnivariateStat st) {
  if (x1.cols() != x2.cols()) throw DimensionError("samples have different numbers of variables");
  const std::string name = std::string("diproperm_") + to_string(st);
  const Eigen::RowVectorXd w = x2.colwise().mean() - x1.colwise().mean();
  const double norm = w.norm();
  if (!(norm > 0.0)) {
    auto s = StatValue::ok(name, st == UnivariateStat::AUC ? 0.5 : 0.0, Direction::Dissimilarity);
    return s.flag("zero_direction");
  }
  const Eigen::VectorXd s1 = x1 * (w.transpose() / norm);
  const Eigen::VectorXd s2 = x2 * (w.transpose() / norm);
  const double n1 = static_cast<double>(s1.size()), n2 = static_cast<double>(s2.size());
  const double m1 = s1.mean(), m2 = s2.mean();
  switch (st) {
    case UnivariateStat::MD: return StatValue::ok(name, m2 - m1, Direction::Dissimilarity);
    case UnivariateStat::T: {
      const double v1 = (s1.array() - m1).square().sum() / (n1 - 1.0);
      const double v2 = (s2.array() - m2).square().sum() / (n2 - 1.0);
      return StatValue::ok(name, (m2 - m1) / std::sqrt(v1 / n1 + v2 / n2), Direction::Dissimilarity);
    }
    case UnivariateStat::AUC: {
      double wins = 0.0;
      for (Eigen::Index i = 0; i < s1.size(); ++i)
        for (Eigen::Index j = 0; j < s2.size(); ++j) wins += s2(j) > s1(i) ? 1.0 : (s2(j) == s1(i) ? 0.5 : 0.0);
      return StatValue::ok(name, wins / (n1 * n2), Direction::Dissimilarity);
    }
  }
  return StatValue::failure(name, Direction::Dissimilarity, "unknown statistic");
}

}  // namespace dsim

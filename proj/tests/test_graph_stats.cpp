#include "dsim/graph_stats.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace dsim;
using namespace dsim::testing;

namespace {

DataMatrix line(std::vector<double> xs) {
  DataMatrix x(static_cast<int>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) x(static_cast<int>(i), 0) = xs[i];
  return x;
}

Graph path(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

Graph complete(int n) {
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

Labels shuffled(std::mt19937_64& rng, const std::vector<int>& sizes) {
  auto l = labels_from_sizes(sizes);
  std::shuffle(l.begin(), l.end(), rng);
  return l;
}

Labels relabel(const Labels& l, const std::vector<int>& perm) {
  Labels out;
  for (int v : l) out.push_back(perm[static_cast<std::size_t>(v)]);
  return out;
}

// Count vector (R_1..R_k, R^B pairs) of a labeling, computed edge by edge.
Eigen::VectorXd direct_counts(const Graph& g, const Labels& l, int k) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, k);
  for (const auto& e : g.edges) {
    const int a = l[static_cast<std::size_t>(e.u)], b = l[static_cast<std::size_t>(e.v)];
    c(std::min(a, b), std::max(a, b)) += 1;
  }
  Eigen::VectorXd v(k + k * (k - 1) / 2);
  int i = 0;
  for (int a = 0; a < k; ++a) v(i++) = c(a, a);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) v(i++) = c(a, b);
  return v;
}

double pinv_form(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  const Eigen::MatrixXd pi = cov.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::VectorXd d = x - mean;
  return d.dot(pi * d);
}

}  // namespace

TEST(EdgeCounts, PathExample) {
  const auto c = edge_counts(path(4), {0, 0, 1, 1}, 2);
  EXPECT_EQ(c.between(0, 1), 1.0);
  EXPECT_EQ(c.within(0), 1.0);
  EXPECT_EQ(c.within(1), 1.0);
}

TEST(EdgeCounts, SingleLabelHasNoBetweenEdges) {
  const auto c = edge_counts(complete(5), {0, 0, 0, 0, 0}, 2);
  EXPECT_EQ(c.between_total(), 0.0);
}

TEST(EdgeCounts, CompleteGraphTwoByTwo) {
  EXPECT_EQ(edge_counts(complete(4), {0, 1, 0, 1}, 2).between(0, 1), 4.0);
}

TEST(EdgeCountsProperty, CountsAddUpToEdges) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 4, 40), k = uniform_int(rng, 2, 4);
    const auto d = distance_matrix(random_matrix(rng, n, 2));
    const auto l = shuffled(rng, random_sizes(rng, n, k));
    const int K = uniform_int(rng, 1, 3);
    for (const auto& g : {knn_graph(d, K), kmst(d, 1)}) {
      const auto c = edge_counts(g, l, k);
      double within = 0;
      for (int a = 0; a < k; ++a) within += c.within(a);
      EXPECT_DOUBLE_EQ(within + c.between_total(), static_cast<double>(g.edges.size()));
      if (g.directed()) EXPECT_EQ(g.edges.size(), static_cast<std::size_t>(K * n));
    }
  }
}

TEST(EdgeTests, FrOnPathMatchesEnumeratedMoments) {
  // Between counts over the six labelings: 1, 3, 2, 2, 3, 1.
  const double mean = 2.0, var = 4.0 / 6.0;
  const auto s = edgecount_test(path(4), {0, 0, 1, 1}, EdgeVariant::FR);
  ASSERT_TRUE(s.valid());
  EXPECT_NEAR(s.value, (1.0 - mean) / std::sqrt(var), 1e-12);
  EXPECT_EQ(s.direction, Direction::Similarity);
}

TEST(EdgeTests, CcsAndZcRawOnPath) {
  const auto z = zc_parts(path(4), {0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(z.rw, 1.0);
  EXPECT_DOUBLE_EQ(z.rd, 0.0);
  EXPECT_DOUBLE_EQ(zc_raw(path(4), {0, 0, 1, 1}, 1.0), 1.0);
}

TEST(EdgeTests, ZeroNullVarianceIsAnError) {
  EXPECT_FALSE(edgecount_test(complete(4), {0, 1, 0, 1}, EdgeVariant::FR).valid());
}

TEST(EdgeTestsProperty, StandardizedValuesMatchEnumeration) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = uniform_int(rng, 4, 8);
    const auto sizes = random_sizes(rng, n, 2);
    const auto g = kmst(distance_matrix(random_matrix(rng, n, 2)), 1);
    const auto l = shuffled(rng, sizes);
    // Enumerate R_1, R_2 and the between count.
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    Eigen::Matrix3d sum2 = Eigen::Matrix3d::Zero();
    double count = 0;
    for_each_labeling(labels_from_sizes(sizes), [&](const Labels& p) {
      const Eigen::Vector3d v = direct_counts(g, p, 2);
      sum += v;
      sum2 += v * v.transpose();
      count += 1;
    });
    const Eigen::Vector3d mean = sum / count;
    const Eigen::Matrix3d cov = sum2 / count - mean * mean.transpose();
    const Eigen::Vector3d obs = direct_counts(g, l, 2);

    const auto fr = edgecount_test(g, l, EdgeVariant::FR);
    if (cov(2, 2) > 1e-12) {
      ASSERT_TRUE(fr.valid());
      EXPECT_NEAR(fr.value, (obs(2) - mean(2)) / std::sqrt(cov(2, 2)), 1e-9);
    }
    const auto cf = edgecount_test(g, l, EdgeVariant::CF);
    EXPECT_NEAR(cf.value, pinv_form(obs.head(2), mean.head(2), cov.topLeftCorner(2, 2)), 1e-7);

    const double w1 = static_cast<double>(sizes[0]) / n, w2 = static_cast<double>(sizes[1]) / n;
    const Eigen::Vector2d aw(w1, w2), ad(1, -1);
    const double vw = aw.dot(cov.topLeftCorner(2, 2) * aw), vd = ad.dot(cov.topLeftCorner(2, 2) * ad);
    if (vw > 1e-12 && vd > 1e-12) {
      const double zw = (aw.dot(obs.head(2)) - aw.dot(mean.head(2))) / std::sqrt(vw);
      const double zd = (ad.dot(obs.head(2)) - ad.dot(mean.head(2))) / std::sqrt(vd);
      EXPECT_NEAR(edgecount_test(g, l, EdgeVariant::CCS).value, zw, 1e-9);
      for (double kappa : {1.0, 1.14, 1.31})
        EXPECT_NEAR(edgecount_test(g, l, EdgeVariant::ZC, kappa).value, std::max(kappa * zw, std::abs(zd)), 1e-9);
    }
  }
}

TEST(Sc, TwoSampleFiniteNonNegative) {
  std::mt19937_64 rng(33);
  const auto g = kmst(distance_matrix(random_matrix(rng, 20, 2)), 1);
  const auto l = shuffled(rng, {10, 10});
  const auto s = sc_test(g, l, 2, ScVariant::SA);
  ASSERT_TRUE(s.valid());
  EXPECT_GE(s.value, 0.0);
}

TEST(Sc, ThreeSamplesMatchEnumeratedQuadraticForms) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<int> sizes{2, 2, 2};
    const auto g = kmst(distance_matrix(random_matrix(rng, 6, 2)), 2);
    const auto l = shuffled(rng, sizes);
    const int m = 6;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(m, m);
    double count = 0;
    for_each_labeling(labels_from_sizes(sizes), [&](const Labels& p) {
      const Eigen::VectorXd v = direct_counts(g, p, 3);
      sum += v;
      sum2 += v * v.transpose();
      count += 1;
    });
    const Eigen::VectorXd mean = sum / count;
    const Eigen::MatrixXd cov = sum2 / count - mean * mean.transpose();
    const Eigen::VectorXd obs = direct_counts(g, l, 3);
    const double s = pinv_form(obs.head(3), mean.head(3), cov.topLeftCorner(3, 3)) +
                     pinv_form(obs.tail(3), mean.tail(3), cov.bottomRightCorner(3, 3));
    const double sa = pinv_form(obs.head(5), mean.head(5), cov.topLeftCorner(5, 5));
    EXPECT_NEAR(sc_test(g, l, 3, ScVariant::S).value, s, 1e-7);
    EXPECT_NEAR(sc_test(g, l, 3, ScVariant::SA).value, sa, 1e-7);
  }
}

TEST(Sc, SeparatedSamplesAreExtreme) {
  std::mt19937_64 rng(35);
  DataMatrix x = random_matrix(rng, 60, 2);
  for (int i = 0; i < 60; ++i) x(i, 0) += 20.0 * (i / 20);
  const auto g = kmst(distance_matrix(x), 1);
  const auto labels = labels_from_sizes({20, 20, 20});
  for (auto v : {ScVariant::S, ScVariant::SA}) {
    const double obs = sc_test(g, labels, 3, v).value;
    std::vector<double> perm;
    for (int r = 0; r < 1000; ++r) perm.push_back(sc_test(g, shuffled(rng, {20, 20, 20}), 3, v).value);
    std::sort(perm.begin(), perm.end());
    EXPECT_GE(obs, perm[989]);
  }
}

TEST(Nn, ShExamples) {
  EXPECT_DOUBLE_EQ(sh_test(distance_matrix(line({0, 1, 10, 11})), {0, 0, 1, 1}, 1).value, 1.0);
  EXPECT_DOUBLE_EQ(sh_test(distance_matrix(line({0, 1, 2, 3})), {0, 1, 0, 1}, 1).value, 0.0);
}

TEST(NnProperty, BqsIsSumOverAllK) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = uniform_int(rng, 3, 30);
    const auto d = distance_matrix(random_matrix(rng, n, 3));
    const auto l = shuffled(rng, random_sizes(rng, n, 2));
    double total = 0;
    for (int K = 1; K < n; ++K) total += sh_test(d, l, K).value * K * n;
    EXPECT_NEAR(bqs_test(d, l).value, total, 1e-9);
  }
}

TEST(CrossMatch, Examples) {
  const auto d = distance_matrix(line({0, 0.1, 10, 10.1}));
  EXPECT_EQ(crossmatch(d, {0, 1, 0, 1}, 2, CrossVariant::Rosenbaum).value, 2.0);
  EXPECT_EQ(crossmatch(d, {0, 0, 1, 1}, 2, CrossVariant::Rosenbaum).value, 0.0);
}

TEST(CrossMatchProperty, PetrieMatchesEnumeration) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 * uniform_int(rng, 2, 4);
    const int k = uniform_int(rng, 2, 3);
    const auto sizes = random_sizes(rng, n, k);
    const auto m = min_weight_matching(distance_matrix(random_matrix(rng, n, 2)));
    const auto g = matching_graph(m, n);
    const auto l = shuffled(rng, sizes);
    double s = 0, s2 = 0, c = 0;
    for_each_labeling(labels_from_sizes(sizes), [&](const Labels& p) {
      const auto v = direct_counts(g, p, k);
      const double b = v.tail(v.size() - k).sum();
      s += b;
      s2 += b * b;
      c += 1;
    });
    const double mean = s / c, var = s2 / c - mean * mean;
    const auto v = direct_counts(g, l, k);
    const auto st = crossmatch(m, l, k, CrossVariant::Petrie);
    if (var > 1e-12) {
      ASSERT_TRUE(st.valid());
      EXPECT_NEAR(st.value, (v.tail(v.size() - k).sum() - mean) / std::sqrt(var), 1e-9);
    }
  }
}

TEST(CrossMatchProperty, MmcmMonotoneInRosenbaumForTwoSamples) {
  // Fixed sizes; the MMCM quadratic form should be a strictly monotone map of
  // the cross-match count across random instances.
  std::mt19937_64 rng(38);
  std::map<double, std::vector<double>> by_count;
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = distance_matrix(random_matrix(rng, 20, 2));
    const auto l = shuffled(rng, {10, 10});
    const double a = crossmatch(d, l, 2, CrossVariant::Rosenbaum).value;
    by_count[a].push_back(crossmatch(d, l, 2, CrossVariant::Mmcm).value);
  }
  ASSERT_GE(by_count.size(), 2u);
  std::vector<double> qs;
  for (auto& [a, vals] : by_count) {
    for (double q : vals) EXPECT_NEAR(q, vals.front(), 1e-9) << "a=" << a;
    qs.push_back(vals.front());
  }
  const bool increasing = std::is_sorted(qs.begin(), qs.end(), std::less_equal<double>());
  const bool decreasing = std::is_sorted(qs.begin(), qs.end(), std::greater_equal<double>());
  EXPECT_TRUE(increasing || decreasing) << "MMCM is not monotone in the cross-match count";
}

TEST(GraphStatsProperty, QuadraticFormsNonNegativeAndRelabelInvariant) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = uniform_int(rng, 8, 40), k = uniform_int(rng, 2, 4);
    const auto d = distance_matrix(random_matrix(rng, n, 3));
    const auto sizes = random_sizes(rng, n, k, 2);
    const auto l = shuffled(rng, sizes);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto l2 = relabel(l, perm);
    const auto mst = kmst(d, 1);
    const auto knn = knn_graph(d, 3);
    for (auto v : {ScVariant::S, ScVariant::SA}) {
      const auto a = sc_test(mst, l, k, v), b = sc_test(mst, l2, k, v);
      EXPECT_GE(a.value, -1e-9);
      EXPECT_NEAR(a.value, b.value, 1e-7 * std::max(1.0, a.value));
    }
    EXPECT_NEAR(kmd(knn, l, k).value, kmd(knn, l2, k).value, 1e-12);
    EXPECT_NEAR(kmd(mst, l, k).value, kmd(mst, l2, k).value, 1e-12);
    if (k == 2) {
      const auto cf = edgecount_test(mst, l, EdgeVariant::CF), cf2 = edgecount_test(mst, l2, EdgeVariant::CF);
      EXPECT_GE(cf.value, -1e-9);
      EXPECT_NEAR(cf.value, cf2.value, 1e-7 * std::max(1.0, cf.value));
      const auto zc = zc_parts(mst, l), zc2 = zc_parts(mst, l2);
      EXPECT_NEAR(zc.rd, zc2.rd, 1e-12);
    }
    if (n % 2 == 0) {
      const auto m = min_weight_matching(d);
      const auto mm = crossmatch(m, l, k, CrossVariant::Mmcm);
      EXPECT_GE(mm.value, -1e-9);
      if (k == 2) EXPECT_NEAR(mm.value, crossmatch(m, l2, k, CrossVariant::Mmcm).value, 1e-9);
    }
  }
}

TEST(Kmd, SeparatedSamplesGiveOne) {
  const auto d = distance_matrix(line({0, 1, 2, 100, 101, 102}));
  EXPECT_NEAR(kmd(knn_graph(d, 1), {0, 0, 0, 1, 1, 1}, 2).value, 1.0, 1e-12);
}

TEST(Kmd, AllLabelsEqualIsAnError) {
  const auto d = distance_matrix(line({0, 1, 2}));
  EXPECT_FALSE(kmd(knn_graph(d, 1), {0, 0, 0}, 2).valid());
}

TEST(Kmd, ShuffledLabelsNearZero) {
  std::mt19937_64 rng(40);
  int close = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto d = distance_matrix(random_matrix(rng, 200, 2));
    if (std::abs(kmd(knn_graph(d, 20), shuffled(rng, {100, 100}), 2).value) < 0.1) ++close;
  }
  EXPECT_GE(close, 95);
}

TEST(KmdProperty, AffineInShForFixedSizes) {
  std::mt19937_64 rng(41);
  for (const auto& [n1, n2, K] : {std::tuple{10, 15, 1}, std::tuple{20, 20, 3}, std::tuple{5, 25, 5}}) {
    std::vector<double> xs, ys;
    for (int trial = 0; trial < 30; ++trial) {
      const auto order = neighbor_order(distance_matrix(random_matrix(rng, n1 + n2, 2)));
      const auto l = shuffled(rng, {n1, n2});
      xs.push_back(sh_test(order, l, K).value);
      ys.push_back(kmd(knn_graph(order, K), l, 2).value);
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      a(static_cast<Eigen::Index>(i), 0) = 1;
      a(static_cast<Eigen::Index>(i), 1) = xs[i];
      b(static_cast<Eigen::Index>(i)) = ys[i];
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
    EXPECT_LT((a * coef - b).cwiseAbs().maxCoeff(), 1e-10);
  }
}

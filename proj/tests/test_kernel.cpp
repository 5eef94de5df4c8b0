#include "dsim/kernel.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace dsim;
using namespace dsim::testing;

namespace {

DataMatrix col(std::vector<double> xs) {
  DataMatrix x(static_cast<int>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) x(static_cast<int>(i), 0) = xs[i];
  return x;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Gaussian kernel with the median heuristic, evaluated directly on rows.
double kern(const DataMatrix& z, Eigen::Index i, Eigen::Index j, double h) {
  return std::exp(-(z.row(i) - z.row(j)).squaredNorm() / (2 * h * h));
}

double mmd_oracle(const DataMatrix& x, const DataMatrix& y) {
  DataMatrix z(x.rows() + y.rows(), x.cols());
  z << x, y;
  std::vector<double> dist;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = i + 1; j < z.rows(); ++j) dist.push_back((z.row(i) - z.row(j)).norm());
  const double h = median_of(dist);
  const Eigen::Index n1 = x.rows(), n2 = y.rows();
  double a = 0, b = 0, c = 0;
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n1; ++j)
      if (i != j) a += kern(z, i, j, h);
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = 0; j < n2; ++j)
      if (i != j) b += kern(z, n1 + i, n1 + j, h);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) c += kern(z, i, n1 + j, h);
  a /= static_cast<double>(n1 * (n1 - 1));
  b /= static_cast<double>(n2 * (n2 - 1));
  c /= static_cast<double>(n1 * n2);
  return a + b - 2 * c;
}

}  // namespace

TEST(Gram, UnitDiagonalAndMedianBandwidth) {
  const auto g = gram(col({0, 1, 2}));
  EXPECT_DOUBLE_EQ(g.bandwidth, 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(g.k(i, i), 1.0);
  EXPECT_NEAR(g.k(0, 2), std::exp(-2.0), 1e-15);
  EXPECT_FALSE(g.fallback);
}

TEST(Gram, LargeBandwidthLimit) {
  const auto g = gram(distance_matrix(col({0, 1, 2})), 1e8);
  EXPECT_NEAR(g.k.minCoeff(), 1.0, 1e-12);
}

TEST(Gram, CoincidentPointsFallBack) {
  const auto g = gram(col({3, 3, 3}));
  EXPECT_TRUE(g.fallback);
  EXPECT_EQ(g.bandwidth, 1.0);
}

TEST(GramProperty, SymmetricPsdEntriesInUnitInterval) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gram(random_matrix(rng, uniform_int(rng, 2, 40), uniform_int(rng, 1, 5)));
    EXPECT_TRUE(g.k.isApprox(g.k.transpose(), 0));
    EXPECT_GT(g.k.minCoeff(), 0.0);
    EXPECT_LE(g.k.maxCoeff(), 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.k);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  }
}

TEST(Mmd, MatchesDirectSums) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 30; ++trial) {
    const int n1 = uniform_int(rng, 2, 6), n2 = uniform_int(rng, 2, 6), p = uniform_int(rng, 1, 3);
    const auto x = random_matrix(rng, n1, p);
    const DataMatrix y = random_matrix(rng, n2, p).array() + 0.3;
    EXPECT_NEAR(mmd_ustat(x, y).value, mmd_oracle(x, y), 1e-12);
  }
  const auto x = random_matrix(rng, 4, 2), y = random_matrix(rng, 4, 2);
  EXPECT_NEAR(mmd_ustat(x, y).value, mmd_oracle(x, y), 1e-12);
}

TEST(Mmd, IdenticalSetsNonPositiveAndShrinking) {
  std::mt19937_64 rng(73);
  double prev = -1e300;
  for (int n : {5, 20, 80, 320}) {
    const auto x = random_matrix(rng, n, 2);
    const double v = mmd_ustat(x, x).value;
    EXPECT_LE(v, 0.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_GT(prev, -0.05);
}

TEST(Mmd, SeparatedClusters) {
  std::mt19937_64 rng(74);
  // Most pairs are within-sample, so the median bandwidth stays far below the
  // cluster separation.
  const DataMatrix x = random_matrix(rng, 40, 2, 0.1);
  const DataMatrix y = random_matrix(rng, 10, 2, 0.1).array() + 100.0;
  const auto parts = mmd_parts(gram(pool(MultiSample({x, y})).data).k, {40, 10});
  EXPECT_LT(parts.gamma, 1e-12);
  EXPECT_NEAR(mmd_ustat(x, y).value, parts.alpha + parts.beta, 1e-12);
  EXPECT_GT(mmd_ustat(x, y).value, 0.5);
}

TEST(Mmd, UnbiasedUnderNull) {
  std::mt19937_64 rng(75);
  std::vector<double> v;
  for (int r = 0; r < 1000; ++r) v.push_back(mmd_ustat(random_matrix(rng, 20, 2), random_matrix(rng, 20, 2)).value);
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double se = std::sqrt(var / (v.size() - 1.0) / static_cast<double>(v.size()));
  EXPECT_LE(std::abs(mean), 3 * se);
}

TEST(BlockMmd, SingleBlockEqualsFullEstimator) {
  std::mt19937_64 rng(76);
  const auto x = random_matrix(rng, 9, 2), y = random_matrix(rng, 9, 2);
  EXPECT_NEAR(block_mmd(x, y, 9).value, mmd_ustat(x, y).value, 1e-12);
}

TEST(BlockMmd, MeanOfBlocks) {
  std::mt19937_64 rng(77);
  const auto x = random_matrix(rng, 16, 2), y = random_matrix(rng, 16, 2);
  double s = 0;
  for (int b = 0; b < 4; ++b) s += mmd_oracle(x.middleRows(4 * b, 4), y.middleRows(4 * b, 4));
  EXPECT_NEAR(block_mmd(x, y).value, s / 4, 1e-12);
}

TEST(BlockMmd, TooSmallBlockIsAnError) { EXPECT_FALSE(block_mmd(col({0, 1, 2}), col({0, 1, 2})).valid()); }

TEST(BlockMmd, NullMeanNearZero) {
  std::mt19937_64 rng(78);
  double s = 0;
  for (int r = 0; r < 200; ++r) s += block_mmd(random_matrix(rng, 400, 2), random_matrix(rng, 400, 2)).value;
  EXPECT_NEAR(s / 200, 0.0, 0.01);
}

TEST(BlockMmd, KernelEvaluationsLinearInN) {
  std::mt19937_64 rng(79);
  std::uint64_t e1 = 0, e2 = 0;
  block_mmd(random_matrix(rng, 100, 2), random_matrix(rng, 100, 2), 5, &e1);
  block_mmd(random_matrix(rng, 400, 2), random_matrix(rng, 400, 2), 5, &e2);
  EXPECT_EQ(e2, 4 * e1);
}

TEST(Gpk, DecompositionIdentity) {
  std::mt19937_64 rng(80);
  for (int trial = 0; trial < 40; ++trial) {
    const int n1 = uniform_int(rng, 3, 30), n2 = uniform_int(rng, 3, 30);
    const auto x = random_matrix(rng, n1, 2);
    const DataMatrix y = random_matrix(rng, n2, 2, uniform(rng, 0.5, 2.0));
    const auto c = gpk_components(gram(pool(MultiSample({x, y})).data), {n1, n2});
    EXPECT_NEAR(c.gpk, c.zw * c.zw + c.zd * c.zd, 1e-8 * std::max(1.0, c.gpk)) << n1 << " " << n2;
    EXPECT_GE(gpk(x, y, GpkVariant::GPK).value, 0.0);
    EXPECT_NEAR(gpk(x, y, GpkVariant::ZD).value, std::abs(c.zd), 1e-12);
  }
}

TEST(Gpk, SwapInvariantForEqualSizes) {
  std::mt19937_64 rng(81);
  const auto x = random_matrix(rng, 12, 2);
  const DataMatrix y = random_matrix(rng, 12, 2, 1.7);
  EXPECT_NEAR(gpk(x, y, GpkVariant::GPK).value, gpk(y, x, GpkVariant::GPK).value, 1e-9);
  EXPECT_NEAR(gpk(x, y, GpkVariant::ZD).value, gpk(y, x, GpkVariant::ZD).value, 1e-9);
}

TEST(Gpk, NullMomentsMatchEnumeration) {
  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = uniform_int(rng, 4, 8);
    const int n1 = uniform_int(rng, 2, n - 2), n2 = n - n1;
    const auto k = gram(random_matrix(rng, n, 2)).k;
    const auto c = gpk_components(GramMatrix{k, 1.0, false}, {n1, n2});
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    Eigen::Matrix2d sum2 = Eigen::Matrix2d::Zero();
    double count = 0;
    for_each_labeling(labels_from_sizes({n1, n2}), [&](const Labels& l) {
      double a = 0, b = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          if (l[static_cast<std::size_t>(i)] == 0 && l[static_cast<std::size_t>(j)] == 0) a += k(i, j);
          if (l[static_cast<std::size_t>(i)] == 1 && l[static_cast<std::size_t>(j)] == 1) b += k(i, j);
        }
      const Eigen::Vector2d v(a / (n1 * (n1 - 1.0)), b / (n2 * (n2 - 1.0)));
      sum += v;
      sum2 += v * v.transpose();
      count += 1;
    });
    const Eigen::Vector2d mean = sum / count;
    const Eigen::Matrix2d cov = sum2 / count - mean * mean.transpose();
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(c.ab.mean(i), mean(i), 1e-12);
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(c.ab.cov(i, j), cov(i, j), 1e-12);
    }
  }
}

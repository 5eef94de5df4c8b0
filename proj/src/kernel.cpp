#include "dsim/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace dsim {

double median_distance(const DistanceMatrix& d) {
  std::vector<double> v;
  const Eigen::Index n = d.rows();
  v.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) v.push_back(d(i, j));
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  double med = v[m];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
    med = 0.5 * (med + lower);
  }
  return med;
}

GramMatrix gram(const DistanceMatrix& d, double h) {
  GramMatrix g;
  g.bandwidth = h;
  const double s = 2.0 * h * h;
  g.k = (-d.array().square() / s).exp().matrix();
  return g;
}

GramMatrix gram_median(const DistanceMatrix& d) {
  if (d.rows() < 2) throw DimensionError("Gram matrix needs N >= 2");
  double h = median_distance(d);
  const bool fallback = !(h > 0.0);
  if (fallback) h = 1.0;
  auto g = gram(d, h);
  g.fallback = fallback;
  return g;
}

GramMatrix gram(const DataMatrix& x) { return gram_median(distance_matrix(x)); }

MmdParts mmd_parts(const Eigen::MatrixXd& k, const std::vector<int>& sizes) {
  if (sizes.size() != 2) throw DimensionError("MMD needs two samples");
  const int n1 = sizes[0], n2 = sizes[1];
  if (n1 < 2 || n2 < 2) throw DimensionError("MMD needs n_i >= 2");
  const auto b11 = k.block(0, 0, n1, n1);
  const auto b22 = k.block(n1, n1, n2, n2);
  MmdParts p;
  p.alpha = (b11.sum() - b11.trace()) / (static_cast<double>(n1) * (n1 - 1));
  p.beta = (b22.sum() - b22.trace()) / (static_cast<double>(n2) * (n2 - 1));
  p.gamma = k.block(0, n1, n1, n2).sum() / (static_cast<double>(n1) * n2);
  return p;
}

StatValue mmd_ustat(const GramMatrix& g, const std::vector<int>& sizes) {
  auto s = StatValue::ok("mmd", mmd_parts(g.k, sizes).mmd2(), Direction::Dissimilarity);
  if (g.fallback) s.flag("bandwidth_fallback");
  return s;
}

StatValue mmd_ustat(const DataMatrix& x1, const DataMatrix& x2) {
  const auto p = pool(MultiSample({x1, x2}));
  return mmd_ustat(gram(p.data), std::vector<int>{static_cast<int>(x1.rows()), static_cast<int>(x2.rows())});
}

StatValue block_mmd(const DataMatrix& x1, const DataMatrix& x2, int block, std::uint64_t* kernel_evals) {
  const int n1 = static_cast<int>(x1.rows()), n2 = static_cast<int>(x2.rows());
  const int nmin = std::min(n1, n2);
  if (block <= 0) block = static_cast<int>(std::floor(std::sqrt(static_cast<double>(nmin))));
  if (block < 2 || block > nmin)
    return StatValue::failure("block_mmd", Direction::Dissimilarity, "block size must lie in [2, n_min]");
  const int nb = nmin / block;
  const int b1 = n1 / nb, b2 = n2 / nb;
  std::uint64_t evals = 0;
  double s = 0.0;
  for (int b = 0; b < nb; ++b) {
    DataMatrix z(b1 + b2, x1.cols());
    z.topRows(b1) = x1.middleRows(b * b1, b1);
    z.bottomRows(b2) = x2.middleRows(b * b2, b2);
    const auto g = gram(z);
    evals += static_cast<std::uint64_t>(b1 + b2) * static_cast<std::uint64_t>(b1 + b2);
    s += mmd_parts(g.k, {b1, b2}).mmd2();
  }
  if (kernel_evals) *kernel_evals = evals;
  return StatValue::ok("block_mmd", s / nb, Direction::Dissimilarity);
}

const char* to_string(GpkVariant v) {
  switch (v) {
    case GpkVariant::GPK: return "gpk";
    case GpkVariant::ZD: return "gpk_ZD";
    case GpkVariant::ZW1: return "gpk_ZW1";
    case GpkVariant::ZW2: return "gpk_ZW2";
  }
  return "?";
}

GpkComponents gpk_components(const GramMatrix& g, const std::vector<int>& sizes) {
  GpkComponents c;
  c.parts = mmd_parts(g.k, sizes);
  const double n1 = sizes[0], n2 = sizes[1], n = n1 + n2;
  const auto s = pair_sums(g.k);
  const Coef ca = pair_coef(2, 0, 0) * (2.0 / (n1 * (n1 - 1.0)));
  const Coef cb = pair_coef(2, 1, 1) * (2.0 / (n2 * (n2 - 1.0)));
  c.ab = null_moments(s, sizes, {ca, cb});
  const Eigen::Vector2d ab(c.parts.alpha, c.parts.beta);
  c.gpk = quadratic_form(ab, c.ab, &c.singular);

  auto standardize = [&](double wa, double wb) {
    const Eigen::Vector2d w(wa, wb);
    const double mean = w.dot(c.ab.mean);
    const double var = w.dot(c.ab.cov * w);
    return var > 0 ? (w.dot(ab) - mean) / std::sqrt(var) : NAN;
  };
  c.zw = standardize(n1 / n, n2 / n);
  c.zw1 = standardize(1.2 * n1 / n, n2 / n);
  c.zw2 = standardize(0.8 * n1 / n, n2 / n);
  c.zd = standardize(n1 * (n1 - 1.0), -n2 * (n2 - 1.0));
  return c;
}

StatValue gpk(const GpkComponents& c, GpkVariant v) {
  StatValue s;
  switch (v) {
    case GpkVariant::GPK: s = StatValue::ok("gpk", c.gpk, Direction::Dissimilarity); break;
    case GpkVariant::ZD: s = StatValue::ok("gpk_ZD", std::abs(c.zd), Direction::Dissimilarity); break;
    case GpkVariant::ZW1: s = StatValue::ok("gpk_ZW1", c.zw1, Direction::Dissimilarity); break;
    case GpkVariant::ZW2: s = StatValue::ok("gpk_ZW2", c.zw2, Direction::Dissimilarity); break;
  }
  if (c.singular && v == GpkVariant::GPK) s.flag("pinv");
  return s;
}

StatValue gpk(const DataMatrix& x1, const DataMatrix& x2, GpkVariant v) {
  const auto p = pool(MultiSample({x1, x2}));
  return gpk(gpk_components(gram(p.data), std::vector<int>{static_cast<int>(x1.rows()), static_cast<int>(x2.rows())}), v);
}

}  // namespace dsim

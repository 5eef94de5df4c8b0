#include "dsim/interpoint.hpp"

#include "dsim/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <unordered_map>

namespace dsim {

namespace {

Pooled pool_two(const DataMatrix& x1, const DataMatrix& x2) {
  return pool(MultiSample({x1, x2}));
}

void require_two(const std::vector<int>& sizes) {
  if (sizes.size() != 2) throw DimensionError("statistic needs exactly two samples");
}

}  // namespace

const char* to_string(Phi f) {
  switch (f) {
    case Phi::Cramer: return "cramer";
    case Phi::Log: return "log";
    case Phi::FracA: return "fracA";
    case Phi::FracB: return "fracB";
    case Phi::Bahr: return "bahr";
  }
  return "?";
}

double phi(Phi f, double x) {
  switch (f) {
    case Phi::Cramer: return std::sqrt(x);
    case Phi::Log: return std::log1p(x);
    case Phi::FracA: return 1.0 - 1.0 / (1.0 + x);
    case Phi::FracB: return 1.0 - 1.0 / ((1.0 + x) * (1.0 + x));
    case Phi::Bahr: return 1.0 - std::exp(-x / 2.0);
  }
  return 0.0;
}

StatValue energy(const DistanceMatrix& d, const std::vector<int>& sizes) {
  const auto off = offsets(sizes);
  const int k = static_cast<int>(sizes.size());
  for (int n : sizes)
    if (n < 1) return StatValue::failure("energy", Direction::Dissimilarity, "empty sample");
  std::vector<double> gw(static_cast<std::size_t>(k));
  auto id = [](double v) { return v; };
  for (int a = 0; a < k; ++a) gw[static_cast<std::size_t>(a)] = block_mean(d, off, a, a, id);
  double t = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double na = sizes[static_cast<std::size_t>(a)], nb = sizes[static_cast<std::size_t>(b)];
      t += na * nb / (na + nb) *
           (2.0 * block_mean(d, off, a, b, id) - gw[static_cast<std::size_t>(a)] - gw[static_cast<std::size_t>(b)]);
    }
  }
  return StatValue::ok("energy", t, Direction::Dissimilarity);
}

StatValue energy(const MultiSample& ms) {
  const auto p = pool(ms);
  return energy(distance_matrix(p.data), ms.sizes());
}

StatValue bf_statistic(const DistanceMatrix& d, const std::vector<int>& sizes, Phi f) {
  require_two(sizes);
  const auto off = offsets(sizes);
  auto k = [f](double dist) { return phi(f, dist * dist); };
  const double n1 = sizes[0], n2 = sizes[1];
  const double t = n1 * n2 / (n1 + n2) *
                   (2.0 * block_mean(d, off, 0, 1, k) - block_mean(d, off, 0, 0, k) - block_mean(d, off, 1, 1, k));
  return StatValue::ok(std::string("bf_") + to_string(f), t, Direction::Dissimilarity);
}

StatValue bf_statistic(const DataMatrix& x1, const DataMatrix& x2, Phi f) {
  const auto p = pool_two(x1, x2);
  return bf_statistic(distance_matrix(p.data), std::vector<int>{static_cast<int>(x1.rows()), static_cast<int>(x2.rows())}, f);
}

StatValue bg2(const DistanceMatrix& d, const std::vector<int>& sizes) {
  require_two(sizes);
  if (sizes[0] < 2 || sizes[1] < 2)
    return StatValue::failure("bg2", Direction::Dissimilarity, "within-sample mean needs n >= 2");
  const auto off = offsets(sizes);
  auto within = [&](int a) {
    double s = 0.0;
    for (int i = off[a]; i < off[a + 1]; ++i)
      for (int j = i + 1; j < off[a + 1]; ++j) s += d(i, j);
    const double n = sizes[static_cast<std::size_t>(a)];
    return 2.0 * s / (n * (n - 1.0));
  };
  const double m11 = within(0), m22 = within(1);
  const double m12 = block_mean(d, off, 0, 1, [](double v) { return v; });
  const double t = (m11 - m12) * (m11 - m12) + (m12 - m22) * (m12 - m22);
  return StatValue::ok("bg2", t, Direction::Dissimilarity);
}

StatValue bg2(const DataMatrix& x1, const DataMatrix& x2) {
  const auto p = pool_two(x1, x2);
  return bg2(distance_matrix(p.data), std::vector<int>{static_cast<int>(x1.rows()), static_cast<int>(x2.rows())});
}

DiscoResult disco_decompose(const DistanceMatrix& d, const std::vector<int>& sizes, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("alpha must lie in (0, 2]");
  const auto off = offsets(sizes);
  const int k = static_cast<int>(sizes.size());
  const double n = off.back();
  auto pw = [alpha](double v) { return alpha == 1.0 ? v : std::pow(v, alpha); };
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) g(a, b) = g(b, a) = block_mean(d, off, a, b, pw);
  DiscoResult r;
  double pooled = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) pooled += sizes[static_cast<std::size_t>(a)] * static_cast<double>(sizes[static_cast<std::size_t>(b)]) * g(a, b);
  r.total = n / 2.0 * pooled / (n * n);
  for (int a = 0; a < k; ++a) r.within += sizes[static_cast<std::size_t>(a)] / 2.0 * g(a, a);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      r.between += sizes[static_cast<std::size_t>(a)] * static_cast<double>(sizes[static_cast<std::size_t>(b)]) / (2.0 * n) *
                   (2.0 * g(a, b) - g(a, a) - g(b, b));
  r.f = (r.between / (k - 1)) / (r.within / (n - k));
  return r;
}

StatValue disco(const DistanceMatrix& d, const std::vector<int>& sizes, double alpha, DiscoVariant v) {
  const auto r = disco_decompose(d, sizes, alpha);
  if (v == DiscoVariant::F) return StatValue::ok("disco_F", r.f, Direction::Dissimilarity);
  return StatValue::ok("disco_B", r.between, Direction::Dissimilarity);
}

StatValue disco(const MultiSample& ms, double alpha, DiscoVariant v) {
  const auto p = pool(ms);
  return disco(distance_matrix(p.data), ms.sizes(), alpha, v);
}

DataMatrix rank_map(const DataMatrix& pooled, std::vector<int>* perm) {
  const int n = static_cast<int>(pooled.rows());
  const DataMatrix grid = halton_grid(n, static_cast<int>(pooled.cols()));
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = (pooled.row(i) - grid.row(j)).squaredNorm();
  const auto sigma = assignment(cost);
  DataMatrix ranks(n, pooled.cols());
  for (int i = 0; i < n; ++i) ranks.row(i) = grid.row(sigma[static_cast<std::size_t>(i)]);
  if (perm) *perm = sigma;
  return ranks;
}

StatValue ds_rank_energy(const DataMatrix& x1, const DataMatrix& x2) {
  const auto p = pool_two(x1, x2);
  const DataMatrix ranks = rank_map(p.data);
  auto s = energy(distance_matrix(ranks), std::vector<int>{static_cast<int>(x1.rows()), static_cast<int>(x2.rows())});
  s.method = "ds";
  return s;
}

StatValue wasserstein1(const DistanceMatrix& d, const std::vector<int>& sizes) {
  require_two(sizes);
  if (sizes[0] != sizes[1])
    throw UnsupportedConfiguration("assignment-based Wasserstein distance needs equal sample sizes");
  const int n = sizes[0];
  const Eigen::MatrixXd cost = d.block(0, n, n, n);
  double total = 0.0;
  assignment(cost, &total);
  return StatValue::ok("wasserstein", total / n, Direction::Dissimilarity);
}

StatValue wasserstein1(const DataMatrix& x1, const DataMatrix& x2) {
  if (x1.rows() != x2.rows())
    throw UnsupportedConfiguration("assignment-based Wasserstein distance needs equal sample sizes");
  double total = 0.0;
  assignment(cross_distances(x1, x2), &total);
  return StatValue::ok("wasserstein", total / static_cast<double>(x1.rows()), Direction::Dissimilarity);
}

const char* to_string(BallAggregation a) {
  switch (a) {
    case BallAggregation::Sum: return "sum";
    case BallAggregation::SumMax: return "summax";
    case BallAggregation::Max: return "max";
  }
  return "?";
}

double ball_divergence_pair(const DistanceMatrix& d, const std::vector<int>& off, int a, int b) {
  // For every ball centred at a point of sample `c` through another point of
  // `c`, compare the empirical masses of both samples (closed balls).
  auto term = [&](int c) {
    const int lo = off[c], hi = off[c + 1];
    const double nc = hi - lo;
    const int la = off[a], ha = off[a + 1], lb = off[b], hb = off[b + 1];
    const double na = ha - la, nb = hb - lb;
    std::vector<double> da, db;
    double s = 0.0;
    for (int i = lo; i < hi; ++i) {
      da.clear();
      db.clear();
      for (int u = la; u < ha; ++u) da.push_back(d(i, u));
      for (int v = lb; v < hb; ++v) db.push_back(d(i, v));
      std::sort(da.begin(), da.end());
      std::sort(db.begin(), db.end());
      for (int j = lo; j < hi; ++j) {
        const double r = d(i, j);
        const double pa = static_cast<double>(std::upper_bound(da.begin(), da.end(), r) - da.begin()) / na;
        const double pb = static_cast<double>(std::upper_bound(db.begin(), db.end(), r) - db.begin()) / nb;
        s += (pa - pb) * (pa - pb);
      }
    }
    return s / (nc * nc);
  };
  return term(a) + term(b);
}

StatValue ball_divergence(const DistanceMatrix& d, const std::vector<int>& sizes, BallAggregation agg) {
  const auto off = offsets(sizes);
  const int k = static_cast<int>(sizes.size());
  Eigen::MatrixXd bd = Eigen::MatrixXd::Zero(k, k);
  std::vector<double> pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      bd(a, b) = bd(b, a) = ball_divergence_pair(d, off, a, b);
      pairs.push_back(bd(a, b));
    }
  double v = 0.0;
  switch (agg) {
    case BallAggregation::Sum:
      for (double x : pairs) v += x;
      break;
    case BallAggregation::SumMax:
      v = bd.rowwise().sum().maxCoeff();
      break;
    case BallAggregation::Max: {
      std::sort(pairs.begin(), pairs.end(), std::greater<>());
      for (int i = 0; i < k - 1 && i < static_cast<int>(pairs.size()); ++i) v += pairs[static_cast<std::size_t>(i)];
      break;
    }
  }
  return StatValue::ok(std::string("ball_") + to_string(agg), v, Direction::Dissimilarity);
}

StatValue ball_divergence(const MultiSample& ms, BallAggregation agg) {
  const auto p = pool(ms);
  return ball_divergence(distance_matrix(p.data), ms.sizes(), agg);
}

StatValue lhz(const DataMatrix& x1, const DataMatrix& x2) {
  // For each difference t = s_u - s_v within a sample, compare the empirical
  // characteristic functions of both samples at t.
  auto ecf = [](const DataMatrix& x, const Eigen::RowVectorXd& t) {
    double c = 0.0, s = 0.0;
    for (Eigen::Index w = 0; w < x.rows(); ++w) {
      const double a = x.row(w).dot(t);
      c += std::cos(a);
      s += std::sin(a);
    }
    const double n = static_cast<double>(x.rows());
    return std::complex<double>(c / n, s / n);
  };
  auto term = [&](const DataMatrix& base) {
    const double n = static_cast<double>(base.rows());
    double s = 0.0;
    for (Eigen::Index u = 0; u < base.rows(); ++u)
      for (Eigen::Index v = u + 1; v < base.rows(); ++v) {
        const Eigen::RowVectorXd t = base.row(u) - base.row(v);
        s += 2.0 * std::norm(ecf(x1, t) - ecf(x2, t));
      }
    return s / (n * n);
  };
  return StatValue::ok("lhz", term(x1) + term(x2), Direction::Dissimilarity);
}

StatValue engineer_metric(const DataMatrix& x1, const DataMatrix& x2, double q) {
  if (!(q > 0)) throw ConfigError("q must be positive");
  if (x1.cols() != x2.cols()) throw DimensionError("samples have different numbers of variables");
  const Eigen::RowVectorXd diff = x1.colwise().mean() - x2.colwise().mean();
  const double s = diff.array().abs().pow(q).sum();
  return StatValue::ok("engineer", std::pow(s, std::min(q, 1.0 / q)), Direction::Dissimilarity);
}

int partition_cells_per_axis(int n, int p, double eps) {
  return std::max(1, static_cast<int>(std::ceil(std::pow(static_cast<double>(n), eps / p) - 1e-12)));
}

StatValue bg_partition_cells(const DataMatrix& x1, const DataMatrix& x2, int m) {
  if (m < 1) throw ConfigError("cells per axis must be positive");
  const int p = static_cast<int>(x1.cols());
  if (std::pow(static_cast<double>(m), p) > kMaxPartitionCells)
    throw UnsupportedConfiguration("too many cells in the rectangular partition");
  const auto pooled = pool_two(x1, x2);
  const Eigen::RowVectorXd lo = pooled.data.colwise().minCoeff();
  const Eigen::RowVectorXd hi = pooled.data.colwise().maxCoeff();
  auto cell_of = [&](const Eigen::RowVectorXd& x) {
    long long idx = 0;
    for (int c = 0; c < p; ++c) {
      int j = 0;
      const double w = hi(c) - lo(c);
      if (w > 0) j = std::min(m - 1, static_cast<int>(std::floor((x(c) - lo(c)) / w * m)));
      idx = idx * m + j;
    }
    return idx;
  };
  std::unordered_map<long long, std::pair<int, int>> counts;
  for (Eigen::Index i = 0; i < x1.rows(); ++i) ++counts[cell_of(x1.row(i))].first;
  for (Eigen::Index i = 0; i < x2.rows(); ++i) ++counts[cell_of(x2.row(i))].second;
  const double n1 = static_cast<double>(x1.rows()), n2 = static_cast<double>(x2.rows());
  double s = 0.0;
  for (const auto& [cell, c] : counts) s += std::abs(c.first / n1 - c.second / n2);
  return StatValue::ok("bg", s, Direction::Dissimilarity);
}

StatValue bg_partition(const DataMatrix& x1, const DataMatrix& x2, double eps) {
  const int n = static_cast<int>(x1.rows() + x2.rows());
  return bg_partition_cells(x1, x2, partition_cells_per_axis(n, static_cast<int>(x1.cols()), eps));
}

}  // namespace dsim

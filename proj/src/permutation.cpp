#include "dsim/permutation.hpp"

namespace dsim {

PairSums pair_sums(const Graph& g) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    w(e.u, e.v) += 1.0;
    w(e.v, e.u) += 1.0;
  }
  // An undirected edge is stored once but added symmetrically above, so the
  // weight of a stored pair is 1; a directed pair stored both ways gets 2.
  return pair_sums(w);
}

PairSums pair_sums(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw DimensionError("weight matrix must be square");
  PairSums s;
  s.n = static_cast<int>(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double deg = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (i == j) continue;
      deg += w(i, j);
      if (j > i) {
        s.total += w(i, j);
        s.sum_sq += w(i, j) * w(i, j);
      }
    }
    s.sum_deg_sq += deg * deg;
  }
  return s;
}

double falling(double x, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= x - i;
  return r;
}

namespace {

void check_sizes(const PairSums& s, const std::vector<int>& sizes, const Coef& c) {
  int total = 0;
  for (int n : sizes) total += n;
  if (total != s.n) throw DimensionError("sizes do not sum to the node count");
  if (c.rows() != static_cast<Eigen::Index>(sizes.size()) || c.cols() != c.rows())
    throw DimensionError("coefficient matrix must be k x k");
}

}  // namespace

double null_mean(const PairSums& s, const std::vector<int>& sizes, const Coef& c) {
  check_sizes(s, sizes, c);
  const int k = static_cast<int>(sizes.size());
  const double nn = s.n;
  double e = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      e += c(a, b) * sizes[static_cast<std::size_t>(a)] * (sizes[static_cast<std::size_t>(b)] - (a == b ? 1 : 0));
  return s.total * e / (nn * (nn - 1.0));
}

double null_cov(const PairSums& s, const std::vector<int>& sizes, const Coef& c1, const Coef& c2) {
  check_sizes(s, sizes, c1);
  check_sizes(s, sizes, c2);
  const int k = static_cast<int>(sizes.size());
  if (k > 16) throw ConfigError("too many samples for exact moments");
  const double nn = s.n;
  // Per-node label probabilities for 2, 3 and 4 distinct nodes, computed
  // from falling factorials of the sample sizes.
  auto prob = [&](const int* lab, int m) {
    int count[16] = {0};
    double num = 1.0;
    for (int t = 0; t < m; ++t) {
      num *= sizes[static_cast<std::size_t>(lab[t])] - count[lab[t]];
      ++count[lab[t]];
    }
    return num / falling(nn, m);
  };

  double same = 0.0, one = 0.0, none = 0.0;
  int lab[4];
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      lab[0] = a;
      lab[1] = b;
      if (nn >= 2) same += c1(a, b) * c2(a, b) * prob(lab, 2);
      for (int c = 0; c < k; ++c) {
        lab[2] = c;
        if (nn >= 3) one += c1(a, b) * c2(a, c) * prob(lab, 3);
        for (int d = 0; d < k; ++d) {
          lab[3] = d;
          if (nn >= 4) none += c1(a, b) * c2(c, d) * prob(lab, 4);
        }
      }
    }
  }
  const double s_same = s.sum_sq;
  const double s_one = s.sum_deg_sq - 2.0 * s.sum_sq;
  const double s_none = s.total * s.total - s_same - s_one;
  const double exy = s_same * same + s_one * one + s_none * none;
  return exy - null_mean(s, sizes, c1) * null_mean(s, sizes, c2);
}

Moments null_moments(const PairSums& s, const std::vector<int>& sizes, const std::vector<Coef>& coefs) {
  const auto m = static_cast<Eigen::Index>(coefs.size());
  Moments out;
  out.mean.resize(m);
  out.cov.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.mean(i) = null_mean(s, sizes, coefs[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = null_cov(s, sizes, coefs[static_cast<std::size_t>(i)], coefs[static_cast<std::size_t>(j)]);
      out.cov(i, j) = v;
      out.cov(j, i) = v;
    }
  }
  return out;
}

Coef pair_coef(int k, int a, int b) {
  Coef c = Coef::Zero(k, k);
  c(a, b) = 1.0;
  c(b, a) = 1.0;
  return c;
}

double quadratic_form(const Eigen::VectorXd& x, const Moments& m, bool* singular) {
  return mahalanobis(x, m.mean, m.cov, singular);
}

}  // namespace dsim

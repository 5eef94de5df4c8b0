#include "dsim/graph_stats.hpp"

#include <algorithm>
#include <cmath>

namespace dsim {

namespace {

constexpr double kVarianceFloor = 1e-12;

StatValue with_pinv_flag(StatValue s, bool singular) {
  if (singular) s.flag("pinv");
  return s;
}

}  // namespace

int label_count(const Labels& labels) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  return k;
}

std::vector<int> label_sizes(const Labels& labels, int k) {
  std::vector<int> n(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw DimensionError("label out of range");
    ++n[static_cast<std::size_t>(l)];
  }
  return n;
}

double EdgeCounts::between_total() const {
  double s = 0.0;
  for (int a = 0; a < k(); ++a)
    for (int b = a + 1; b < k(); ++b) s += counts(a, b);
  return s;
}

EdgeCounts edge_counts(const Graph& g, const Labels& labels, int k) {
  if (static_cast<int>(labels.size()) != g.n) throw DimensionError("labels must cover every node");
  EdgeCounts c;
  c.counts = Eigen::MatrixXd::Zero(k, k);
  for (const auto& e : g.edges) {
    const int a = labels[static_cast<std::size_t>(e.u)], b = labels[static_cast<std::size_t>(e.v)];
    c.counts(std::min(a, b), std::max(a, b)) += 1.0;
  }
  c.total = static_cast<double>(g.edges.size());
  return c;
}

std::vector<Coef> count_coefs(int k) {
  std::vector<Coef> out;
  for (int a = 0; a < k; ++a) out.push_back(pair_coef(k, a, a));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) out.push_back(pair_coef(k, a, b));
  return out;
}

Eigen::VectorXd count_vector(const EdgeCounts& c) {
  const int k = c.k();
  Eigen::VectorXd v(k + k * (k - 1) / 2);
  int i = 0;
  for (int a = 0; a < k; ++a) v(i++) = c.within(a);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) v(i++) = c.counts(a, b);
  return v;
}

Moments null_moments(const Graph& g, const std::vector<int>& sizes) {
  return null_moments(pair_sums(g), sizes, count_coefs(static_cast<int>(sizes.size())));
}

ZcParts zc_parts(const Graph& g, const Labels& labels) {
  const auto sizes = label_sizes(labels, 2);
  const auto c = edge_counts(g, labels, 2);
  const double n = g.n;
  const double w1 = sizes[0] / n, w2 = sizes[1] / n;
  Coef cw = w1 * pair_coef(2, 0, 0) + w2 * pair_coef(2, 1, 1);
  Coef cd = pair_coef(2, 0, 0) - pair_coef(2, 1, 1);
  const auto s = pair_sums(g);
  const auto m = null_moments(s, sizes, {cw, cd});
  ZcParts z;
  z.rw = w1 * c.within(0) + w2 * c.within(1);
  const double diff = c.within(0) - c.within(1);
  z.rd = std::abs(diff);
  z.zw = m.cov(0, 0) > kVarianceFloor ? (z.rw - m.mean(0)) / std::sqrt(m.cov(0, 0)) : NAN;
  z.zd = m.cov(1, 1) > kVarianceFloor ? (diff - m.mean(1)) / std::sqrt(m.cov(1, 1)) : NAN;
  return z;
}

double zc_raw(const Graph& g, const Labels& labels, double kappa) {
  const auto z = zc_parts(g, labels);
  return std::max(kappa * z.rw, z.rd);
}

StatValue edgecount_test(const Graph& g, const Labels& labels, EdgeVariant v, double kappa) {
  const auto sizes = label_sizes(labels, label_count(labels));
  if (sizes.size() != 2) throw DimensionError("edge-count tests need two samples");
  switch (v) {
    case EdgeVariant::FR: {
      const auto c = edge_counts(g, labels, 2);
      const auto m = null_moments(pair_sums(g), sizes, {pair_coef(2, 0, 1)});
      if (m.cov(0, 0) <= kVarianceFloor) return StatValue::failure("fr", Direction::Similarity, "zero null variance");
      return StatValue::ok("fr", (c.counts(0, 1) - m.mean(0)) / std::sqrt(m.cov(0, 0)), Direction::Similarity);
    }
    case EdgeVariant::CF: {
      const auto c = edge_counts(g, labels, 2);
      const auto m = null_moments(pair_sums(g), sizes, {pair_coef(2, 0, 0), pair_coef(2, 1, 1)});
      Eigen::Vector2d r(c.within(0), c.within(1));
      bool singular = false;
      const double q = quadratic_form(r, m, &singular);
      return with_pinv_flag(StatValue::ok("cf", q, Direction::Dissimilarity), singular);
    }
    case EdgeVariant::CCS: {
      const auto z = zc_parts(g, labels);
      if (!std::isfinite(z.zw)) return StatValue::failure("ccs", Direction::Dissimilarity, "zero null variance");
      return StatValue::ok("ccs", z.zw, Direction::Dissimilarity);
    }
    case EdgeVariant::ZC: {
      const auto z = zc_parts(g, labels);
      if (!std::isfinite(z.zw) || !std::isfinite(z.zd))
        return StatValue::failure("zc", Direction::Dissimilarity, "zero null variance");
      return StatValue::ok("zc", std::max(kappa * z.zw, std::abs(z.zd)), Direction::Dissimilarity);
    }
  }
  return StatValue::failure("edgecount", Direction::Dissimilarity, "unknown variant");
}

StatValue sc_test(const Graph& g, const Labels& labels, int k, ScVariant v) {
  const auto sizes = label_sizes(labels, k);
  const auto c = edge_counts(g, labels, k);
  const auto s = pair_sums(g);
  const auto coefs = count_coefs(k);
  const Eigen::VectorXd obs = count_vector(c);
  bool singular = false;
  if (v == ScVariant::S) {
    const std::vector<Coef> cw(coefs.begin(), coefs.begin() + k);
    const std::vector<Coef> cb(coefs.begin() + k, coefs.end());
    bool s1 = false, s2 = false;
    const double sw = quadratic_form(obs.head(k), null_moments(s, sizes, cw), &s1);
    const double sb = quadratic_form(obs.tail(obs.size() - k), null_moments(s, sizes, cb), &s2);
    singular = s1 || s2;
    return with_pinv_flag(StatValue::ok("sc_S", sw + sb, Direction::Dissimilarity), singular);
  }
  const std::vector<Coef> ca(coefs.begin(), coefs.end() - 1);
  const double sa = quadratic_form(obs.head(obs.size() - 1), null_moments(s, sizes, ca), &singular);
  return with_pinv_flag(StatValue::ok("sc_SA", sa, Direction::Dissimilarity), singular);
}

StatValue sh_test(const std::vector<std::vector<int>>& order, const Labels& labels, int K) {
  const int n = static_cast<int>(order.size());
  if (K < 1 || K > n - 1) throw ConfigError("K must lie in [1, N-1]");
  double same = 0.0;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < K; ++r)
      same += labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)])];
  return StatValue::ok("sh", same / (static_cast<double>(K) * n), Direction::Dissimilarity);
}

StatValue sh_test(const DistanceMatrix& d, const Labels& labels, int K) {
  return sh_test(neighbor_order(d), labels, K);
}

StatValue bqs_test(const std::vector<std::vector<int>>& order, const Labels& labels) {
  const int n = static_cast<int>(order.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n - 1; ++r)
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)])])
        total += n - 1 - r;
  return StatValue::ok("bqs", total, Direction::Dissimilarity);
}

StatValue bqs_test(const DistanceMatrix& d, const Labels& labels) { return bqs_test(neighbor_order(d), labels); }

Eigen::MatrixXd crossmatch_counts(const Matching& m, const Labels& labels, int k) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (const auto& [i, j] : m.pairs) {
    const int x = labels[static_cast<std::size_t>(i)], y = labels[static_cast<std::size_t>(j)];
    a(std::min(x, y), std::max(x, y)) += 1.0;
  }
  return a;
}

Graph matching_graph(const Matching& m, int n) {
  Graph g;
  g.n = n;
  g.kind = GraphKind::Matching;
  for (const auto& [i, j] : m.pairs) g.edges.push_back({i, j});
  return g;
}

std::vector<std::pair<int, int>> mmcm_pairs(int k) {
  if (k == 2) return {{0, 1}};
  if (k == 4) return {{0, 1}, {0, 2}, {1, 2}, {1, 3}};
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) out.emplace_back(a, b);
  return out;
}

StatValue crossmatch(const Matching& m, const Labels& labels, int k, CrossVariant v) {
  const int n = static_cast<int>(labels.size());
  const auto sizes = label_sizes(labels, k);
  const auto a = crossmatch_counts(m, labels, k);
  switch (v) {
    case CrossVariant::Rosenbaum:
      if (k != 2) throw DimensionError("the cross-match count needs two samples");
      return StatValue::ok("rosenbaum", a(0, 1), Direction::Similarity);
    case CrossVariant::Petrie: {
      Coef c = Coef::Zero(k, k);
      double obs = 0.0;
      for (int x = 0; x < k; ++x)
        for (int y = x + 1; y < k; ++y) {
          c += pair_coef(k, x, y);
          obs += a(x, y);
        }
      const auto mo = null_moments(pair_sums(matching_graph(m, n)), sizes, {c});
      if (mo.cov(0, 0) <= kVarianceFloor)
        return StatValue::failure("petrie", Direction::Similarity, "zero null variance");
      return StatValue::ok("petrie", (obs - mo.mean(0)) / std::sqrt(mo.cov(0, 0)), Direction::Similarity);
    }
    case CrossVariant::Mmcm: {
      const auto pairs = mmcm_pairs(k);
      std::vector<Coef> coefs;
      Eigen::VectorXd obs(static_cast<Eigen::Index>(pairs.size()));
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        coefs.push_back(pair_coef(k, pairs[i].first, pairs[i].second));
        obs(static_cast<Eigen::Index>(i)) = a(pairs[i].first, pairs[i].second);
      }
      const auto mo = null_moments(pair_sums(matching_graph(m, n)), sizes, coefs);
      bool singular = false;
      const double q = quadratic_form(obs, mo, &singular);
      return with_pinv_flag(StatValue::ok("mmcm", q, Direction::Dissimilarity), singular);
    }
  }
  return StatValue::failure("crossmatch", Direction::Dissimilarity, "unknown variant");
}

StatValue crossmatch(const DistanceMatrix& d, const Labels& labels, int k, CrossVariant v) {
  return crossmatch(min_weight_matching(d), labels, k, v);
}

StatValue kmd(const Graph& g, const Labels& labels, int k) {
  const int n = g.n;
  if (static_cast<int>(labels.size()) != n) throw DimensionError("labels must cover every node");
  const auto sizes = label_sizes(labels, k);
  double same_pairs = 0.0;
  for (int s : sizes) same_pairs += static_cast<double>(s) * (s - 1);
  const double base = same_pairs / (static_cast<double>(n) * (n - 1));
  const double denom = 1.0 - base;
  if (denom <= 0.0) return StatValue::failure("kmd", Direction::Dissimilarity, "all labels equal");
  std::vector<double> hits(static_cast<std::size_t>(n), 0.0);
  const auto deg = g.out_degrees();
  for (const auto& e : g.edges) {
    const bool same = labels[static_cast<std::size_t>(e.u)] == labels[static_cast<std::size_t>(e.v)];
    if (!same) continue;
    hits[static_cast<std::size_t>(e.u)] += 1.0;
    if (!g.directed()) hits[static_cast<std::size_t>(e.v)] += 1.0;
  }
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    if (deg[static_cast<std::size_t>(i)] > 0) num += hits[static_cast<std::size_t>(i)] / deg[static_cast<std::size_t>(i)];
  num /= n;
  return StatValue::ok("kmd", (num - base) / denom, Direction::Dissimilarity);
}

}  // namespace dsim

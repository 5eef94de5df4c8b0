#include "dsim/graphs.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dsim {

std::vector<int> Graph::out_degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    if (!directed()) ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

std::vector<std::vector<int>> neighbor_order(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.rows());
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = out[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 0; j < n; ++j)
      if (j != i) row.push_back(j);
    std::sort(row.begin(), row.end(), [&](int a, int b) {
      const double da = d(i, a), db = d(i, b);
      return da < db || (da == db && a < b);
    });
  }
  return out;
}

Graph knn_graph(const std::vector<std::vector<int>>& order, int K) {
  const int n = static_cast<int>(order.size());
  if (K < 1 || K > n - 1) throw ConfigError("K must lie in [1, N-1]");
  Graph g;
  g.n = n;
  g.kind = GraphKind::KnnDirected;
  g.K = K;
  g.edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(K));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < K; ++r) g.edges.push_back({i, order[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)]});
  return g;
}

Graph knn_graph(const DistanceMatrix& d, int K) {
  const int n = static_cast<int>(d.rows());
  if (K < 1 || K > n - 1) throw ConfigError("K must lie in [1, N-1]");
  return knn_graph(neighbor_order(d), K);
}

Graph kmst(const DistanceMatrix& d, int K) {
  const int n = static_cast<int>(d.rows());
  if (n < 2) throw ConfigError("need at least two nodes");
  if (K < 1) throw ConfigError("K must be positive");
  Graph g;
  g.n = n;
  g.kind = GraphKind::Kmst;
  g.K = K;
  std::vector<char> used(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  auto is_used = [&](int a, int b) -> char& {
    return used[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)];
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<char> in_tree(static_cast<std::size_t>(n));
  for (int layer = 0; layer < K; ++layer) {
    std::fill(key.begin(), key.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(in_tree.begin(), in_tree.end(), 0);
    key[0] = 0.0;
    for (int step = 0; step < n; ++step) {
      int best = -1;
      for (int v = 0; v < n; ++v)
        if (!in_tree[static_cast<std::size_t>(v)] && (best < 0 || key[static_cast<std::size_t>(v)] < key[static_cast<std::size_t>(best)]))
          best = v;
      if (key[static_cast<std::size_t>(best)] == inf)
        throw UnsupportedConfiguration("graph disconnected before all spanning-tree layers were built");
      in_tree[static_cast<std::size_t>(best)] = 1;
      const int pb = parent[static_cast<std::size_t>(best)];
      if (pb >= 0) {
        is_used(pb, best) = is_used(best, pb) = 1;
        g.edges.push_back({std::min(pb, best), std::max(pb, best)});
        g.layer.push_back(layer);
      }
      for (int v = 0; v < n; ++v) {
        if (in_tree[static_cast<std::size_t>(v)] || is_used(best, v)) continue;
        if (d(best, v) < key[static_cast<std::size_t>(v)]) {
          key[static_cast<std::size_t>(v)] = d(best, v);
          parent[static_cast<std::size_t>(v)] = best;
        }
      }
    }
  }
  return g;
}

Matching min_weight_matching(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.rows());
  Matching m;
  if (n < 2) {
    if (n == 1) m.unmatched = 0;
    return m;
  }
  const bool odd = n % 2 == 1;
  const int nn = odd ? n + 1 : n;
  const double dmax = d.maxCoeff();
  // Integer weights keep the dual updates exact; 2^40 levels over the
  // distance range lose nothing visible at double precision of the sum.
  const double unit = dmax > 0 ? dmax / static_cast<double>(1LL << 40) : 1.0;
  const long long top = (1LL << 40) + 1;
  std::vector<WeightedEdge> edges;
  edges.reserve(static_cast<std::size_t>(nn) * static_cast<std::size_t>(nn - 1) / 2);
  for (int i = 0; i < nn; ++i) {
    for (int j = i + 1; j < nn; ++j) {
      long long q = 0;
      if (j < n) q = std::llround(d(i, j) / unit);
      edges.push_back({i, j, 2 * (top - q)});
    }
  }
  const auto mate = max_weight_matching(edges, true);
  for (int i = 0; i < n; ++i) {
    const int j = mate[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n) {
      m.unmatched = i;
      continue;
    }
    if (i < j) {
      m.pairs.emplace_back(i, j);
      m.weight += d(i, j);
    }
  }
  return m;
}

std::vector<int> assignment(const Eigen::MatrixXd& cost, double* total) {
  if (cost.rows() != cost.cols()) throw DimensionError("assignment needs a square cost matrix");
  if (!cost.allFinite()) throw DimensionError("assignment costs must be finite");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with row/column potentials, 1-based.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  if (total) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += cost(i, perm[static_cast<std::size_t>(i)]);
    *total = s;
  }
  return perm;
}

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int q : primes) {
      if (q * q > c) break;
      if (c % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

DataMatrix halton_grid(int n, int p) {
  if (n < 1 || p < 1) throw ConfigError("halton grid needs n >= 1 and p >= 1");
  const auto bases = first_primes(p);
  DataMatrix h(n, p);
  for (int c = 0; c < p; ++c) {
    const int b = bases[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i) {
      double f = 1.0, r = 0.0;
      for (long long k = i + 1; k > 0; k /= b) {
        f /= b;
        r += f * static_cast<double>(k % b);
      }
      h(i, c) = r;
    }
  }
  return h;
}

}  // namespace dsim

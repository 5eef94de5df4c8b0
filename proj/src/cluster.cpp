#include "dsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dsim {

double madd_psi(int psi, double t) {
  switch (psi) {
    case 1: return t * t;
    case 2: return 1.0 - std::exp(-t);
    case 3: return 1.0 - std::exp(-t * t);
    case 4: return std::log1p(t);
    case 5: return t;
  }
  throw ConfigError("psi must be 1..5");
}

double madd_h(int h, double t) {
  switch (h) {
    case 1: return std::sqrt(t);
    case 2: return t;
  }
  throw ConfigError("h must be 1 or 2");
}

Eigen::MatrixXd madd_phi(const DataMatrix& z, const MaddConfig& cfg) {
  const Eigen::Index n = z.rows();
  const double p = static_cast<double>(z.cols());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index l = 0; l < z.cols(); ++l) s += madd_psi(cfg.psi, std::abs(z(i, l) - z(j, l)));
      phi(i, j) = phi(j, i) = madd_h(cfg.h, s / p);
    }
  return phi;
}

DistanceMatrix madd_from_phi(const Eigen::MatrixXd& phi, const std::vector<int>& rows) {
  std::vector<int> idx = rows;
  if (idx.empty()) {
    idx.resize(static_cast<std::size_t>(phi.rows()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  }
  const int n = static_cast<int>(idx.size());
  if (n < 3) throw DimensionError("MADD needs N >= 3");
  Eigen::MatrixXd sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sub(i, j) = phi(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  DistanceMatrix rho = DistanceMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) {
        if (m == i || m == j) continue;
        s += std::abs(sub(i, m) - sub(j, m));
      }
      rho(i, j) = rho(j, i) = s / (n - 2);
    }
  return rho;
}

DistanceMatrix madd(const DataMatrix& z, const MaddConfig& cfg) { return madd_from_phi(madd_phi(z, cfg)); }

Clustering cluster_madd(const DistanceMatrix& rho, int l, std::uint64_t seed) {
  const int n = static_cast<int>(rho.rows());
  if (l < 2 || l > n) throw ConfigError("cluster count must lie in [2, N]");
  std::mt19937_64 rng(seed);
  std::vector<int> medoids;
  std::uniform_int_distribution<int> first(0, n - 1);
  medoids.push_back(first(rng));
  std::vector<double> dmin(static_cast<std::size_t>(n));
  while (static_cast<int>(medoids.size()) < l) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double m = std::numeric_limits<double>::infinity();
      for (int c : medoids) m = std::min(m, rho(i, c));
      dmin[static_cast<std::size_t>(i)] = m * m;
      total += m * m;
    }
    int pick = -1;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng), acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += dmin[static_cast<std::size_t>(i)];
        if (dmin[static_cast<std::size_t>(i)] > 0 && r <= acc) {
          pick = i;
          break;
        }
      }
    }
    if (pick < 0)
      for (int i = 0; i < n && pick < 0; ++i)
        if (std::find(medoids.begin(), medoids.end(), i) == medoids.end()) pick = i;
    medoids.push_back(pick);
  }

  Clustering out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  auto assign = [&]() {
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int c = 0; c < l; ++c) {
        if (i == medoids[static_cast<std::size_t>(c)]) {
          best = c;
          break;
        }
        if (rho(i, medoids[static_cast<std::size_t>(c)]) < rho(i, medoids[static_cast<std::size_t>(best)])) best = c;
      }
      out.labels[static_cast<std::size_t>(i)] = best;
    }
  };
  out.converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    assign();
    bool changed = false;
    for (int c = 0; c < l; ++c) {
      int best = medoids[static_cast<std::size_t>(c)];
      double best_cost = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (out.labels[static_cast<std::size_t>(i)] != c) continue;
        double cost = 0.0;
        for (int j = 0; j < n; ++j)
          if (out.labels[static_cast<std::size_t>(j)] == c) cost += rho(i, j);
        if (cost < best_cost - 1e-12 * std::abs(best_cost) ||
            (cost <= best_cost && i == medoids[static_cast<std::size_t>(c)])) {
          best_cost = cost;
          best = i;
        }
      }
      if (best != medoids[static_cast<std::size_t>(c)]) {
        medoids[static_cast<std::size_t>(c)] = best;
        changed = true;
      }
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  assign();
  return out;
}

Eigen::MatrixXi contingency(const Labels& truth, int k, const std::vector<int>& clusters, int l) {
  if (truth.size() != clusters.size()) throw DimensionError("label vectors differ in length");
  Eigen::MatrixXi t = Eigen::MatrixXi::Zero(k, l);
  for (std::size_t i = 0; i < truth.size(); ++i) ++t(truth[i], clusters[i]);
  return t;
}

double fisher_stat(const Eigen::MatrixXi& t) {
  const double n = t.sum();
  double lp = -std::lgamma(n + 1.0);
  for (Eigen::Index i = 0; i < t.rows(); ++i) lp += std::lgamma(t.row(i).sum() + 1.0);
  for (Eigen::Index j = 0; j < t.cols(); ++j) lp += std::lgamma(t.col(j).sum() + 1.0);
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) lp -= std::lgamma(t(i, j) + 1.0);
  return -lp;
}

double rand_disagreement(const Labels& truth, const std::vector<int>& clusters) {
  const std::size_t n = truth.size();
  if (n < 2) throw DimensionError("need at least two points");
  double bad = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      bad += (truth[i] == truth[j]) != (clusters[i] == clusters[j]);
  return bad / (static_cast<double>(n) * (n - 1) / 2.0);
}

double dunn_index(const DistanceMatrix& rho, const std::vector<int>& clusters) {
  const int n = static_cast<int>(clusters.size());
  int used = 0;
  for (int c : clusters) used = std::max(used, c + 1);
  std::vector<char> present(static_cast<std::size_t>(used), 0);
  for (int c : clusters) present[static_cast<std::size_t>(c)] = 1;
  if (std::count(present.begin(), present.end(), 1) < 2) throw DimensionError("Dunn index needs two clusters");
  double sep = std::numeric_limits<double>::infinity(), diam = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (clusters[static_cast<std::size_t>(i)] == clusters[static_cast<std::size_t>(j)]) diam = std::max(diam, rho(i, j));
      else sep = std::min(sep, rho(i, j));
    }
  if (diam == 0.0) return std::numeric_limits<double>::infinity();
  return sep / diam;
}

const char* to_string(FsVariant v) {
  switch (v) {
    case FsVariant::FS: return "FS";
    case FsVariant::RI: return "RI";
    case FsVariant::MFS: return "MFS";
    case FsVariant::MRI: return "MRI";
    case FsVariant::MSFS: return "MSFS";
    case FsVariant::MSRI: return "MSRI";
    case FsVariant::AFS: return "AFS";
    case FsVariant::ARI: return "ARI";
  }
  return "?";
}

ClusterInput cluster_input(const MultiSample& ms, const MaddConfig& cfg) {
  const auto p = pool(ms);
  ClusterInput in;
  in.phi = madd_phi(p.data, cfg);
  in.rho = madd_from_phi(in.phi);
  in.labels = p.labels;
  in.k = ms.k();
  return in;
}

namespace {

bool is_fs(FsVariant v) {
  return v == FsVariant::FS || v == FsVariant::MFS || v == FsVariant::MSFS || v == FsVariant::AFS;
}

struct TableStat {
  double value = 0.0;
  bool ok = true;
};

TableStat table_stat(bool fs, const Labels& truth, int k, const Clustering& c, int l) {
  const auto t = contingency(truth, k, c.labels, l);
  int nonempty = 0;
  for (Eigen::Index j = 0; j < t.cols(); ++j) nonempty += t.col(j).sum() > 0;
  if (nonempty < 2) return {0.0, false};
  return {fs ? fisher_stat(t) : rand_disagreement(truth, c.labels), true};
}

const Clustering& cached(const ClusterInput& in, int l, std::uint64_t seed) {
  const auto key = std::make_pair(l, seed);
  auto it = in.cache.find(key);
  if (it == in.cache.end())
    it = in.cache.emplace(key, cluster_madd(in.rho, l, derive_seed(seed, static_cast<std::uint64_t>(l)))).first;
  return it->second;
}

template <typename ClusterFn>
int dunn_choice(const DistanceMatrix& rho, int lmax, ClusterFn&& cluster) {
  int best = 2;
  double best_dunn = -1.0;
  const int n = static_cast<int>(rho.rows());
  for (int l = 2; l <= std::min(lmax, n - 1); ++l) {
    const double d = dunn_index(rho, cluster(l).labels);
    if (d > best_dunn) {
      best_dunn = d;
      best = l;
    }
  }
  return best;
}

}  // namespace

StatValue fs_ri(const ClusterInput& in, const FsOptions& opt, std::uint64_t seed) {
  const bool fs = is_fs(opt.variant);
  const Direction dir = fs ? Direction::Dissimilarity : Direction::Similarity;
  const std::string name = to_string(opt.variant);
  const int k = in.k;
  const int n = static_cast<int>(in.labels.size());

  auto full = [&](int l) -> const Clustering& { return cached(in, l, seed); };
  auto run_full = [&](int l, bool& ok) {
    const auto r = table_stat(fs, in.labels, k, full(l), l);
    ok = r.ok;
    return r.value;
  };

  bool ok = true;
  double v = 0.0;
  switch (opt.variant) {
    case FsVariant::FS:
    case FsVariant::RI:
      v = run_full(k, ok);
      break;
    case FsVariant::MFS:
    case FsVariant::MRI:
      v = run_full(dunn_choice(in.rho, 2 * k, full), ok);
      break;
    case FsVariant::MSFS:
    case FsVariant::MSRI: {
      const int l = opt.scale_index + 1;
      if (l < 2 || l > 2 * k) throw ConfigError("multi-scale index out of range");
      v = run_full(l, ok);
      break;
    }
    case FsVariant::AFS:
    case FsVariant::ARI: {
      // All pairwise two-sample tests on MADD restricted to the pair.
      std::vector<double> stats;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          std::vector<int> rows;
          Labels truth;
          for (int i = 0; i < n; ++i) {
            const int lab = in.labels[static_cast<std::size_t>(i)];
            if (lab == a || lab == b) {
              rows.push_back(i);
              truth.push_back(lab == a ? 0 : 1);
            }
          }
          const auto rho = madd_from_phi(in.phi, rows);
          std::map<int, Clustering> local;
          auto pair_cluster = [&](int l) -> const Clustering& {
            auto it = local.find(l);
            if (it == local.end())
              it = local.emplace(l, cluster_madd(rho, l, derive_seed(seed, static_cast<std::uint64_t>(l)))).first;
            return it->second;
          };
          const int l = opt.estimate ? dunn_choice(rho, 4, pair_cluster) : 2;
          const auto r = table_stat(fs, truth, 2, pair_cluster(l), l);
          stats.push_back(r.value);
          ok = ok && r.ok;
        }
      const double m = static_cast<double>(stats.size());
      // Bonferroni on the smallest table probability; Rand disagreement is
      // aggregated by its minimum.
      v = fs ? *std::max_element(stats.begin(), stats.end()) - std::log(m)
             : *std::min_element(stats.begin(), stats.end());
      break;
    }
  }
  if (!ok) return StatValue::failure(name, dir, "degenerate clustering");
  return StatValue::ok(name, v, dir);
}

StatValue fs_ri(const MultiSample& ms, const MaddConfig& cfg, const FsOptions& opt, std::uint64_t seed) {
  return fs_ri(cluster_input(ms, cfg), opt, seed);
}

}  // namespace dsim

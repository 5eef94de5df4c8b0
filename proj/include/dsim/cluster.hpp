#pragma once

#include "dsim/core.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace dsim {

// psi_1(t) = t^2, psi_2(t) = 1 - exp(-t), psi_3(t) = 1 - exp(-t^2),
// psi_4(t) = log(1 + t), psi_5(t) = t; h_1(t) = sqrt(t), h_2(t) = t.
struct MaddConfig {
  int psi = 1;
  int h = 1;
};

double madd_psi(int psi, double t);
double madd_h(int h, double t);

// phi(z_i, z_j) = h(mean_l psi(|z_il - z_jl|)) for all pairs.
Eigen::MatrixXd madd_phi(const DataMatrix& z, const MaddConfig& cfg);
// rho(i, j) = mean over m outside {i, j} of |phi(i, m) - phi(j, m)|, restricted
// to the given rows of phi (all rows when `rows` is empty).
DistanceMatrix madd_from_phi(const Eigen::MatrixXd& phi, const std::vector<int>& rows = {});
DistanceMatrix madd(const DataMatrix& z, const MaddConfig& cfg);

struct Clustering {
  std::vector<int> labels;
  bool converged = true;
};

// k-medoids on a dissimilarity matrix: seeded k-medoids++ start, then
// alternating assignment / medoid update for at most 100 rounds.
Clustering cluster_madd(const DistanceMatrix& rho, int l, std::uint64_t seed);

Eigen::MatrixXi contingency(const Labels& truth, int k, const std::vector<int>& clusters, int l);

// -log of the multivariate hypergeometric probability of the table.
double fisher_stat(const Eigen::MatrixXi& table);
// Proportion of point pairs on which the two partitions disagree.
double rand_disagreement(const Labels& truth, const std::vector<int>& clusters);
// Minimum between-cluster dissimilarity over the maximum cluster diameter.
double dunn_index(const DistanceMatrix& rho, const std::vector<int>& clusters);

enum class FsVariant { FS, RI, MFS, MRI, MSFS, MSRI, AFS, ARI };
const char* to_string(FsVariant v);

struct FsOptions {
  FsVariant variant = FsVariant::FS;
  // Multi-scale variants: statistic index k' (clusters used minus one).
  int scale_index = 1;
  // Aggregated variants: estimate the cluster count by the Dunn index.
  bool estimate = false;
};

// Precomputed clustering inputs for one pooled sample.
struct ClusterInput {
  Eigen::MatrixXd phi;
  DistanceMatrix rho;
  Labels labels;
  int k = 2;
  // Clusterings of rho keyed by (cluster count, seed).
  mutable std::map<std::pair<int, std::uint64_t>, Clustering> cache;
};

ClusterInput cluster_input(const MultiSample& ms, const MaddConfig& cfg);
StatValue fs_ri(const ClusterInput& in, const FsOptions& opt, std::uint64_t seed);
StatValue fs_ri(const MultiSample& ms, const MaddConfig& cfg, const FsOptions& opt, std::uint64_t seed);

}  // namespace dsim

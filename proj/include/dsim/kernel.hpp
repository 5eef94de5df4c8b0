#pragma once

#include "dsim/core.hpp"
#include "dsim/permutation.hpp"

#include <cstdint>
#include <vector>

namespace dsim {

// Gaussian kernel exp(-||x - y||^2 / (2 h^2)) on the pooled sample.
struct GramMatrix {
  Eigen::MatrixXd k;
  double bandwidth = 1.0;
  // Set when all points coincide and h fell back to 1.
  bool fallback = false;
};

// Median of the pairwise distances (i < j); 0 when all points coincide.
double median_distance(const DistanceMatrix& d);
GramMatrix gram(const DataMatrix& x);
GramMatrix gram(const DistanceMatrix& d, double bandwidth);
GramMatrix gram_median(const DistanceMatrix& d);

// Unbiased MMD^2 = alpha + beta - 2 gamma on the pooled Gram matrix.
struct MmdParts {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double mmd2() const { return alpha + beta - 2.0 * gamma; }
};
MmdParts mmd_parts(const Eigen::MatrixXd& k, const std::vector<int>& sizes);
StatValue mmd_ustat(const DataMatrix& x1, const DataMatrix& x2);
StatValue mmd_ustat(const GramMatrix& g, const std::vector<int>& sizes);

// Mean of per-block unbiased MMD^2 estimates over disjoint consecutive
// blocks. `block` is the block size of the smaller sample (0: floor(sqrt(n_min))).
// Every block gets its own median bandwidth, so the cost is linear in N for a
// fixed block size; `kernel_evals` receives the number of kernel evaluations.
StatValue block_mmd(const DataMatrix& x1, const DataMatrix& x2, int block = 0,
                    std::uint64_t* kernel_evals = nullptr);

enum class GpkVariant { GPK, ZD, ZW1, ZW2 };
const char* to_string(GpkVariant v);

struct GpkComponents {
  MmdParts parts;
  Moments ab;      // permutation moments of (alpha, beta)
  double gpk = 0;  // quadratic form of (alpha, beta)
  double zw = 0;   // standardized W_1
  double zd = 0;   // standardized D (signed)
  double zw1 = 0;  // standardized W_{1.2}
  double zw2 = 0;  // standardized W_{0.8}
  bool singular = false;
};

GpkComponents gpk_components(const GramMatrix& g, const std::vector<int>& sizes);
// GPK reports the quadratic form, ZD reports |Z_D|, ZW1 / ZW2 the signed
// standardized W_r.
StatValue gpk(const DataMatrix& x1, const DataMatrix& x2, GpkVariant v);
StatValue gpk(const GpkComponents& c, GpkVariant v);

}  // namespace dsim

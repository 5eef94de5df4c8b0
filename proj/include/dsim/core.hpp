#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsim {

// One sample: rows are observations, columns are variables.
using DataMatrix = Eigen::MatrixXd;
// Pooled pairwise Euclidean distances (symmetric, zero diagonal).
using DistanceMatrix = Eigen::MatrixXd;
// Sample membership of each pooled observation, 0-based.
using Labels = std::vector<int>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A statistic cannot be evaluated for this input shape (e.g. unequal sizes
// for the assignment-based Wasserstein distance, too many partition cells).
class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { Dissimilarity, Similarity };

const char* to_string(Direction d);

struct StatValue {
  std::string method;
  double value = std::numeric_limits<double>::quiet_NaN();
  Direction direction = Direction::Dissimilarity;
  std::optional<std::string> error;
  // Non-fatal diagnostics, e.g. "pinv" when a pseudo-inverse was used.
  std::vector<std::string> flags;

  static StatValue ok(std::string method, double value, Direction dir) {
    StatValue s;
    s.method = std::move(method);
    s.value = value;
    s.direction = dir;
    if (!std::isfinite(value)) s.error = "non-finite value";
    return s;
  }
  static StatValue failure(std::string method, Direction dir, std::string why) {
    StatValue s;
    s.method = std::move(method);
    s.direction = dir;
    s.error = std::move(why);
    return s;
  }

  bool valid() const { return !error && std::isfinite(value); }
  bool has_flag(const std::string& f) const;
  StatValue& flag(std::string f) {
    flags.push_back(std::move(f));
    return *this;
  }
};

// k >= 2 samples over a shared variable space, optionally with a binary
// target per observation.
class MultiSample {
 public:
  MultiSample() = default;
  explicit MultiSample(std::vector<DataMatrix> samples);
  MultiSample(std::vector<DataMatrix> samples, std::vector<Eigen::VectorXi> target);

  int k() const { return static_cast<int>(samples_.size()); }
  int p() const { return static_cast<int>(samples_.front().cols()); }
  int total() const;
  std::vector<int> sizes() const;

  const DataMatrix& sample(int i) const { return samples_.at(static_cast<std::size_t>(i)); }
  const std::vector<DataMatrix>& samples() const { return samples_; }

  bool has_target() const { return target_.has_value(); }
  const std::vector<Eigen::VectorXi>& target() const { return *target_; }

  // Set when some sample's target takes a single value only.
  bool degenerate_target() const { return degenerate_target_; }
  void set_degenerate_target(bool v) { degenerate_target_ = v; }

  // Covariates with the target appended as an extra numeric column.
  MultiSample with_target_as_feature() const;

 private:
  std::vector<DataMatrix> samples_;
  std::optional<std::vector<Eigen::VectorXi>> target_;
  bool degenerate_target_ = false;
};

struct Pooled {
  DataMatrix data;
  Labels labels;
};

// Concatenate the samples in order; labels are 0..k-1.
Pooled pool(const MultiSample& ms);

// Split a pooled matrix at cumulative sizes.
std::vector<DataMatrix> split(const DataMatrix& pooled, const std::vector<int>& sizes);

// Throws DimensionError on empty or non-finite data.
void validate(const DataMatrix& x);

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
distance_matrix(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j, j) = Scalar(0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const Scalar v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

// Cross distances between the rows of a and the rows of b.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
cross_distances(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) d(i, j) = (a.row(i) - b.row(j)).norm();
  return d;
}

// Row offsets of each sample inside the pooled matrix (size k+1).
std::vector<int> offsets(const std::vector<int>& sizes);

// Moore-Penrose inverse of a symmetric matrix. `singular` is set when any
// eigenvalue was treated as zero.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& a, bool* singular = nullptr);

// (x - mean)' pinv(cov) (x - mean).
double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                   const Eigen::MatrixXd& cov, bool* singular = nullptr);

// Stable 64-bit mixing used to derive independent RNG streams.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(const std::string& s);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

}  // namespace dsim

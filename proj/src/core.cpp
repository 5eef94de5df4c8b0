#include "dsim/core.hpp"

#include <algorithm>

namespace dsim {

const char* to_string(Direction d) {
  return d == Direction::Dissimilarity ? "dissimilarity" : "similarity";
}

bool StatValue::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

void validate(const DataMatrix& x) {
  if (x.rows() < 1 || x.cols() < 1) throw DimensionError("data matrix must have n >= 1 and p >= 1");
  if (!x.allFinite()) throw DimensionError("data matrix contains non-finite entries");
}

MultiSample::MultiSample(std::vector<DataMatrix> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw DimensionError("need at least two samples");
  for (const auto& s : samples_) {
    validate(s);
    if (s.cols() != samples_.front().cols())
      throw DimensionError("samples have different numbers of variables");
  }
}

MultiSample::MultiSample(std::vector<DataMatrix> samples, std::vector<Eigen::VectorXi> target)
    : MultiSample(std::move(samples)) {
  if (target.size() != samples_.size()) throw DimensionError("target must be given for every sample");
  for (std::size_t i = 0; i < target.size(); ++i)
    if (target[i].size() != samples_[i].rows())
      throw DimensionError("target length does not match sample size");
  target_ = std::move(target);
}

int MultiSample::total() const {
  int n = 0;
  for (const auto& s : samples_) n += static_cast<int>(s.rows());
  return n;
}

std::vector<int> MultiSample::sizes() const {
  std::vector<int> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(static_cast<int>(s.rows()));
  return out;
}

MultiSample MultiSample::with_target_as_feature() const {
  if (!target_) return *this;
  std::vector<DataMatrix> out;
  out.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    DataMatrix m(samples_[i].rows(), samples_[i].cols() + 1);
    m.leftCols(samples_[i].cols()) = samples_[i];
    m.col(samples_[i].cols()) = (*target_)[i].cast<double>();
    out.push_back(std::move(m));
  }
  MultiSample ms(std::move(out));
  ms.degenerate_target_ = degenerate_target_;
  return ms;
}

std::vector<int> offsets(const std::vector<int>& sizes) {
  std::vector<int> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

Pooled pool(const MultiSample& ms) {
  if (ms.k() < 2) throw DimensionError("need at least two samples");
  const int p = ms.p();
  for (const auto& s : ms.samples())
    if (s.cols() != p) throw DimensionError("samples have different numbers of variables");
  Pooled out;
  out.data.resize(ms.total(), p);
  out.labels.reserve(static_cast<std::size_t>(ms.total()));
  Eigen::Index row = 0;
  for (int i = 0; i < ms.k(); ++i) {
    const auto& s = ms.sample(i);
    out.data.middleRows(row, s.rows()) = s;
    row += s.rows();
    out.labels.insert(out.labels.end(), static_cast<std::size_t>(s.rows()), i);
  }
  return out;
}

std::vector<DataMatrix> split(const DataMatrix& pooled, const std::vector<int>& sizes) {
  const auto off = offsets(sizes);
  if (off.back() != pooled.rows()) throw DimensionError("sizes do not sum to pooled row count");
  std::vector<DataMatrix> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out.emplace_back(pooled.middleRows(off[i], sizes[i]));
  return out;
}

Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& a, bool* singular) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double tol = std::max(scale, 1.0) * 1e-10 * static_cast<double>(a.rows());
  Eigen::VectorXd inv(ev.size());
  bool dropped = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > tol) {
      inv(i) = 1.0 / ev(i);
    } else {
      inv(i) = 0.0;
      dropped = true;
    }
  }
  if (singular) *singular = dropped;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                   bool* singular) {
  const Eigen::VectorXd d = x - mean;
  return d.dot(symmetric_pinv(cov, singular) * d);
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(master) ^ a) ^ (b * 0x9e3779b97f4a7c15ULL + 1));
}

}  // namespace dsim

#pragma once

#include "dsim/cluster.hpp"
#include "dsim/core.hpp"
#include "dsim/graphs.hpp"
#include "dsim/kernel.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dsim {

struct MethodInfo {
  std::string id;
  Direction direction;
  int min_k = 2;
  int max_k = 0;  // 0: any k
  // Multi-scale FS/RI: applicable while scale_index + 1 <= 2k.
  int scale_index = 0;
};

// Every implemented statistic, sorted by id.
const std::vector<MethodInfo>& method_table();
const MethodInfo* find_method(const std::string& id);
// Throws ConfigError for unknown ids.
Direction direction_of(const std::string& id);
bool applicable(const MethodInfo& m, int k);
// All methods applicable to k samples, sorted by id.
std::vector<std::string> methods_for_k(int k);

// Per-repetition cache of pooled quantities shared by several statistics.
// Not thread-safe; one context per worker and repetition.
class EvalContext {
 public:
  EvalContext(const MultiSample& ms, std::uint64_t seed);

  // Samples as seen by the statistics (a binary target becomes a column).
  const MultiSample& data() const { return data_; }
  const MultiSample& original() const { return original_; }
  std::uint64_t seed() const { return seed_; }
  int k() const { return data_.k(); }
  int n() const { return data_.total(); }
  const std::vector<int>& sizes() const { return sizes_; }

  const Pooled& pooled();
  const DistanceMatrix& distances();
  const std::vector<std::vector<int>>& order();
  const Graph& knn(int K);
  const Graph& mst(int K);
  const Matching& matching();
  const GramMatrix& gram();
  const GpkComponents& gpk();
  const ClusterInput& clusters();

 private:
  MultiSample original_;
  MultiSample data_;
  std::uint64_t seed_;
  std::vector<int> sizes_;
  std::optional<Pooled> pooled_;
  std::optional<DistanceMatrix> d_;
  std::optional<std::vector<std::vector<int>>> order_;
  std::map<int, Graph> knn_;
  std::optional<Graph> mst5_;
  std::map<int, Graph> mst_;
  std::optional<Matching> matching_;
  std::optional<GramMatrix> gram_;
  std::optional<GpkComponents> gpk_;
  std::optional<ClusterInput> clusters_;
};

// Evaluates one registered method. Statistic-level failures (including
// exceptions raised by the statistic) come back as a failed StatValue;
// unknown ids throw ConfigError.
StatValue evaluate(const std::string& id, EvalContext& ctx);

}  // namespace dsim

#pragma once

#include "dsim/core.hpp"

#include <utility>
#include <vector>

namespace dsim {

struct Edge {
  int u;
  int v;
};

enum class GraphKind { KnnDirected, Kmst, Matching };

// Similarity graph on the pooled sample. Directed K-NN graphs store u -> v;
// undirected kinds store u < v.
struct Graph {
  int n = 0;
  GraphKind kind = GraphKind::Kmst;
  int K = 1;
  std::vector<Edge> edges;
  // For K-MST: layer index (0-based) of each edge.
  std::vector<int> layer;

  bool directed() const { return kind == GraphKind::KnnDirected; }
  std::vector<int> out_degrees() const;
  // Undirected degrees (a directed edge counts once for each endpoint).
  std::vector<int> degrees() const;
};

// Neighbours of every node sorted by (distance, index), self excluded.
std::vector<std::vector<int>> neighbor_order(const DistanceMatrix& d);

Graph knn_graph(const DistanceMatrix& d, int K);
Graph knn_graph(const std::vector<std::vector<int>>& order, int K);

// Union of K successive edge-disjoint minimum spanning trees.
Graph kmst(const DistanceMatrix& d, int K);

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // first < second
  double weight = 0.0;
  // Node left out when N is odd, -1 otherwise.
  int unmatched = -1;
};

// Exact minimum-weight perfect matching on the complete graph. For odd N a
// zero-distance phantom node is added and its partner is reported as
// unmatched.
Matching min_weight_matching(const DistanceMatrix& d);

// Maximum-weight matching on a general graph with integer weights. Returns
// mate[v] (-1 if unmatched). With max_cardinality only maximum-cardinality
// matchings are considered.
struct WeightedEdge {
  int u;
  int v;
  long long w;
};
std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality);

// Minimum-cost assignment for a square cost matrix: row i -> column perm[i].
std::vector<int> assignment(const Eigen::MatrixXd& cost, double* total = nullptr);

// First n points of the Halton sequence in [0,1]^p (bases: first p primes).
DataMatrix halton_grid(int n, int p);
std::vector<int> first_primes(int count);

}  // namespace dsim

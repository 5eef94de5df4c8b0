#include "dsim/registry.hpp"

#include "dsim/classifier.hpp"
#include "dsim/graph_stats.hpp"
#include "dsim/interpoint.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace dsim {

namespace {

using Handler = std::function<StatValue(EvalContext&)>;

struct Entry {
  MethodInfo info;
  Handler run;
};

constexpr auto Dis = Direction::Dissimilarity;
constexpr auto Sim = Direction::Similarity;

// Graph used by edge-count statistics: "1mst", "5mst", "1nn", "5nn".
struct GraphSpec {
  std::string tag;
  bool mst;
  int K;
};

const std::vector<GraphSpec>& edge_graphs() {
  static const std::vector<GraphSpec> g{{"1mst", true, 1}, {"5mst", true, 5}, {"1nn", false, 1}, {"5nn", false, 5}};
  return g;
}

const Graph& graph_of(EvalContext& ctx, const GraphSpec& g) { return g.mst ? ctx.mst(g.K) : ctx.knn(g.K); }

const DataMatrix& x(EvalContext& ctx, int i) { return ctx.data().sample(i); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<Entry> build_entries() {
  std::vector<Entry> e;
  auto add = [&](std::string id, Direction dir, int min_k, int max_k, Handler h, int scale = 0) {
    e.push_back({MethodInfo{std::move(id), dir, min_k, max_k, scale}, std::move(h)});
  };

  // Inter-point distance statistics.
  add("energy", Dis, 2, 0, [](EvalContext& c) { return energy(c.distances(), c.sizes()); });
  const std::vector<std::pair<std::string, Phi>> phis{
      {"bf_cramer", Phi::Cramer}, {"bf_log", Phi::Log}, {"bf_fraca", Phi::FracA}, {"bf_fracb", Phi::FracB}, {"bahr", Phi::Bahr}};
  for (const auto& [id, f] : phis)
    add(id, Dis, 2, 2, [f = f](EvalContext& c) { return bf_statistic(c.distances(), c.sizes(), f); });
  add("bg2", Dis, 2, 2, [](EvalContext& c) { return bg2(c.distances(), c.sizes()); });
  for (double alpha : {0.5, 1.0}) {
    add("disco_f_" + fmt(alpha), Dis, 2, 0,
        [alpha](EvalContext& c) { return disco(c.distances(), c.sizes(), alpha, DiscoVariant::F); });
    add("disco_b_" + fmt(alpha), Dis, 2, 0,
        [alpha](EvalContext& c) { return disco(c.distances(), c.sizes(), alpha, DiscoVariant::B); });
  }
  add("ds", Dis, 2, 2, [](EvalContext& c) { return ds_rank_energy(x(c, 0), x(c, 1)); });
  add("wasserstein", Dis, 2, 2, [](EvalContext& c) { return wasserstein1(c.distances(), c.sizes()); });
  const std::vector<std::pair<std::string, BallAggregation>> balls{
      {"ball_sum", BallAggregation::Sum}, {"ball_summax", BallAggregation::SumMax}, {"ball_max", BallAggregation::Max}};
  for (const auto& [id, agg] : balls)
    add(id, Dis, 2, 0, [agg = agg](EvalContext& c) { return ball_divergence(c.distances(), c.sizes(), agg); });
  add("lhz", Dis, 2, 2, [](EvalContext& c) { return lhz(x(c, 0), x(c, 1)); });
  add("engineer", Dis, 2, 2, [](EvalContext& c) { return engineer_metric(x(c, 0), x(c, 1)); });
  for (double eps : {0.5, 0.8, 0.9})
    add("bg_" + fmt(eps), Dis, 2, 2, [eps](EvalContext& c) { return bg_partition(x(c, 0), x(c, 1), eps); });

  // Graph statistics.
  for (const auto& g : edge_graphs()) {
    add("fr_" + g.tag, Sim, 2, 2,
        [g](EvalContext& c) { return edgecount_test(graph_of(c, g), c.pooled().labels, EdgeVariant::FR); });
    add("cf_" + g.tag, Dis, 2, 2,
        [g](EvalContext& c) { return edgecount_test(graph_of(c, g), c.pooled().labels, EdgeVariant::CF); });
    add("ccs_" + g.tag, Dis, 2, 2,
        [g](EvalContext& c) { return edgecount_test(graph_of(c, g), c.pooled().labels, EdgeVariant::CCS); });
    for (double kappa : {1.0, 1.14, 1.31})
      add("zc_" + fmt(kappa) + "_" + g.tag, Dis, 2, 2, [g, kappa](EvalContext& c) {
        return edgecount_test(graph_of(c, g), c.pooled().labels, EdgeVariant::ZC, kappa);
      });
    add("sc_s_" + g.tag, Dis, 2, 0,
        [g](EvalContext& c) { return sc_test(graph_of(c, g), c.pooled().labels, c.k(), ScVariant::S); });
    add("sc_sa_" + g.tag, Dis, 2, 0,
        [g](EvalContext& c) { return sc_test(graph_of(c, g), c.pooled().labels, c.k(), ScVariant::SA); });
  }
  for (int K : {1, 5})
    add("sh_" + std::to_string(K), Dis, 2, 2, [K](EvalContext& c) { return sh_test(c.order(), c.pooled().labels, K); });
  add("bqs", Dis, 2, 2, [](EvalContext& c) { return bqs_test(c.order(), c.pooled().labels); });
  add("rosenbaum", Sim, 2, 2,
      [](EvalContext& c) { return crossmatch(c.matching(), c.pooled().labels, c.k(), CrossVariant::Rosenbaum); });
  add("petrie", Sim, 2, 0,
      [](EvalContext& c) { return crossmatch(c.matching(), c.pooled().labels, c.k(), CrossVariant::Petrie); });
  add("mmcm", Dis, 2, 0,
      [](EvalContext& c) { return crossmatch(c.matching(), c.pooled().labels, c.k(), CrossVariant::Mmcm); });
  add("kmd_1nn", Dis, 2, 0, [](EvalContext& c) { return kmd(c.knn(1), c.pooled().labels, c.k()); });
  add("kmd_5nn", Dis, 2, 0, [](EvalContext& c) { return kmd(c.knn(5), c.pooled().labels, c.k()); });
  add("kmd_0.1n", Dis, 2, 0,
      [](EvalContext& c) { return kmd(c.knn(std::max(1, c.n() / 10)), c.pooled().labels, c.k()); });
  add("kmd_mst", Dis, 2, 0, [](EvalContext& c) { return kmd(c.mst(1), c.pooled().labels, c.k()); });

  // Kernel statistics.
  add("mmd", Dis, 2, 2, [](EvalContext& c) { return mmd_ustat(c.gram(), c.sizes()); });
  add("block_mmd", Dis, 2, 2, [](EvalContext& c) { return block_mmd(x(c, 0), x(c, 1)); });
  const std::vector<std::pair<std::string, GpkVariant>> gpks{
      {"gpk", GpkVariant::GPK}, {"gpk_zd", GpkVariant::ZD}, {"gpk_zw1", GpkVariant::ZW1}, {"gpk_zw2", GpkVariant::ZW2}};
  for (const auto& [id, v] : gpks) add(id, Dis, 2, 2, [v = v](EvalContext& c) { return gpk(c.gpk(), v); });

  // Clustering statistics on the MADD dissimilarity.
  auto fs_entry = [&](const std::string& id, FsVariant v, Direction dir, int scale, bool estimate) {
    add(id, dir, 2, 0, [v, scale, estimate](EvalContext& c) {
      return fs_ri(c.clusters(), FsOptions{v, scale, estimate}, c.seed());
    }, scale);
  };
  fs_entry("fs", FsVariant::FS, Dis, 0, false);
  fs_entry("ri", FsVariant::RI, Sim, 0, false);
  fs_entry("mfs", FsVariant::MFS, Dis, 0, false);
  fs_entry("mri", FsVariant::MRI, Sim, 0, false);
  for (int s = 1; s <= 7; ++s) {
    fs_entry("msfs_" + std::to_string(s), FsVariant::MSFS, Dis, s, false);
    fs_entry("msri_" + std::to_string(s), FsVariant::MSRI, Sim, s, false);
  }
  fs_entry("afs", FsVariant::AFS, Dis, 0, false);
  fs_entry("afs_m", FsVariant::AFS, Dis, 0, true);
  fs_entry("ari", FsVariant::ARI, Sim, 0, false);
  fs_entry("ari_m", FsVariant::ARI, Sim, 0, true);

  // Classifier statistics.
  add("c2st", Dis, 2, 0, [](EvalContext& c) { return c2st_knn(c.data(), derive_seed(c.seed(), hash_string("c2st"))); });
  add("ymrzl", Sim, 2, 0, [](EvalContext& c) { return ymrzl(c.data(), derive_seed(c.seed(), hash_string("ymrzl"))); });
  const std::vector<std::pair<std::string, UnivariateStat>> dpp{
      {"diproperm_md", UnivariateStat::MD}, {"diproperm_t", UnivariateStat::T}, {"diproperm_auc", UnivariateStat::AUC}};
  for (const auto& [id, s] : dpp) add(id, Dis, 2, 2, [s = s](EvalContext& c) { return diproperm(x(c, 0), x(c, 1), s); });

  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.info.id < b.info.id; });
  return e;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = build_entries();
  return e;
}

const Entry* find_entry(const std::string& id) {
  const auto& e = entries();
  auto it = std::lower_bound(e.begin(), e.end(), id, [](const Entry& a, const std::string& s) { return a.info.id < s; });
  return it != e.end() && it->info.id == id ? &*it : nullptr;
}

}  // namespace

const std::vector<MethodInfo>& method_table() {
  static const std::vector<MethodInfo> t = [] {
    std::vector<MethodInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return t;
}

const MethodInfo* find_method(const std::string& id) {
  const auto* e = find_entry(id);
  return e ? &e->info : nullptr;
}

Direction direction_of(const std::string& id) {
  const auto* m = find_method(id);
  if (!m) throw ConfigError("unknown method: " + id);
  return m->direction;
}

bool applicable(const MethodInfo& m, int k) {
  if (k < m.min_k || (m.max_k > 0 && k > m.max_k)) return false;
  return m.scale_index == 0 || m.scale_index + 1 <= 2 * k;
}

std::vector<std::string> methods_for_k(int k) {
  std::vector<std::string> out;
  for (const auto& m : method_table())
    if (applicable(m, k)) out.push_back(m.id);
  return out;
}

EvalContext::EvalContext(const MultiSample& ms, std::uint64_t seed)
    : original_(ms), data_(ms.with_target_as_feature()), seed_(seed), sizes_(ms.sizes()) {}

const Pooled& EvalContext::pooled() {
  if (!pooled_) pooled_ = pool(data_);
  return *pooled_;
}

const DistanceMatrix& EvalContext::distances() {
  if (!d_) d_ = distance_matrix(pooled().data);
  return *d_;
}

const std::vector<std::vector<int>>& EvalContext::order() {
  if (!order_) order_ = neighbor_order(distances());
  return *order_;
}

const Graph& EvalContext::knn(int K) {
  auto it = knn_.find(K);
  if (it == knn_.end()) it = knn_.emplace(K, knn_graph(order(), K)).first;
  return it->second;
}

const Graph& EvalContext::mst(int K) {
  auto it = mst_.find(K);
  if (it != mst_.end()) return it->second;
  // Successive MSTs: the first K layers of the 5-MST are the K-MST.
  if (K > 5 || n() < 10) return mst_.emplace(K, kmst(distances(), K)).first->second;
  if (!mst5_) mst5_ = kmst(distances(), 5);
  Graph g;
  g.n = mst5_->n;
  g.kind = GraphKind::Kmst;
  g.K = K;
  for (std::size_t i = 0; i < mst5_->edges.size(); ++i)
    if (mst5_->layer[i] < K) {
      g.edges.push_back(mst5_->edges[i]);
      g.layer.push_back(mst5_->layer[i]);
    }
  return mst_.emplace(K, std::move(g)).first->second;
}

const Matching& EvalContext::matching() {
  if (!matching_) matching_ = min_weight_matching(distances());
  return *matching_;
}

const GramMatrix& EvalContext::gram() {
  if (!gram_) gram_ = gram_median(distances());
  return *gram_;
}

const GpkComponents& EvalContext::gpk() {
  if (!gpk_) gpk_ = gpk_components(gram(), sizes_);
  return *gpk_;
}

const ClusterInput& EvalContext::clusters() {
  if (!clusters_) clusters_ = cluster_input(data_, MaddConfig{});
  return *clusters_;
}

StatValue evaluate(const std::string& id, EvalContext& ctx) {
  const auto* e = find_entry(id);
  if (!e) throw ConfigError("unknown method: " + id);
  StatValue s;
  if (!applicable(e->info, ctx.k())) {
    s = StatValue::failure(id, e->info.direction, "not applicable to k = " + std::to_string(ctx.k()));
  } else {
    try {
      s = e->run(ctx);
    } catch (const std::exception& ex) {
      s = StatValue::failure(id, e->info.direction, ex.what());
    }
  }
  s.method = id;
  s.direction = e->info.direction;
  return s;
}

}  // namespace dsim

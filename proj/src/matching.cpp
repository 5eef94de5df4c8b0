// Maximum-weight general matching (Edmonds' blossom algorithm with dual
// variables, O(n^3)), following Van Rantwijk's formulation. All arithmetic is
// integral; weights should be even so blossom duals stay integers.
#include "dsim/graphs.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace dsim {

namespace {

class BlossomMatcher {
 public:
  BlossomMatcher(const std::vector<WeightedEdge>& edges, bool max_cardinality)
      : edges_(edges), maxcard_(max_cardinality) {
    for (const auto& e : edges_) nv_ = std::max({nv_, e.u + 1, e.v + 1});
    const std::size_t ne = edges_.size();
    long long maxw = 0;
    for (const auto& e : edges_) maxw = std::max(maxw, e.w);
    endpoint_.resize(2 * ne);
    for (std::size_t p = 0; p < 2 * ne; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.assign(static_cast<std::size_t>(nv_), {});
    for (std::size_t k = 0; k < ne; ++k) {
      neighbend_[static_cast<std::size_t>(edges_[k].u)].push_back(static_cast<int>(2 * k + 1));
      neighbend_[static_cast<std::size_t>(edges_[k].v)].push_back(static_cast<int>(2 * k));
    }
    const std::size_t n2 = 2 * static_cast<std::size_t>(nv_);
    mate_.assign(static_cast<std::size_t>(nv_), -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(static_cast<std::size_t>(nv_));
    std::iota(inblossom_.begin(), inblossom_.end(), 0);
    blossomparent_.assign(n2, -1);
    blossomchilds_.assign(n2, {});
    blossombase_.assign(n2, -1);
    for (int v = 0; v < nv_; ++v) blossombase_[static_cast<std::size_t>(v)] = v;
    blossomendps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    blossombestedges_.assign(n2, {});
    has_bbe_.assign(n2, 0);
    for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
    std::reverse(unused_.begin(), unused_.end());
    dualvar_.assign(n2, 0);
    for (int v = 0; v < nv_; ++v) dualvar_[static_cast<std::size_t>(v)] = maxw;
    allowedge_.assign(ne, 0);
  }

  std::vector<int> run() {
    if (edges_.empty()) return {};
    const std::size_t n2 = 2 * static_cast<std::size_t>(nv_);
    for (int t = 0; t < nv_; ++t) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (std::size_t b = static_cast<std::size_t>(nv_); b < n2; ++b) {
        blossombestedges_[b].clear();
        has_bbe_[b] = 0;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), 0);
      queue_.clear();
      for (int v = 0; v < nv_; ++v)
        if (mate_[u(v)] == -1 && label_[u(inblossom_[u(v)])] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[u(v)]) {
            const int k = p / 2;
            const int w = endpoint_[u(p)];
            if (inblossom_[u(v)] == inblossom_[u(w)]) continue;
            long long kslack = 0;
            if (!allowedge_[u(k)]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[u(k)] = 1;
            }
            if (allowedge_[u(k)]) {
              if (label_[u(inblossom_[u(w)])] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[u(inblossom_[u(w)])] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[u(w)] == 0) {
                label_[u(w)] = 2;
                labelend_[u(w)] = p ^ 1;
              }
            } else if (label_[u(inblossom_[u(w)])] == 1) {
              const int b = inblossom_[u(v)];
              if (bestedge_[u(b)] == -1 || kslack < slack(bestedge_[u(b)])) bestedge_[u(b)] = k;
            } else if (label_[u(w)] == 0) {
              if (bestedge_[u(w)] == -1 || kslack < slack(bestedge_[u(w)])) bestedge_[u(w)] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = -1;
        long long delta = 0;
        int deltaedge = -1, deltablossom = -1;
        if (!maxcard_) {
          deltatype = 1;
          delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        }
        for (int v = 0; v < nv_; ++v) {
          if (label_[u(inblossom_[u(v)])] == 0 && bestedge_[u(v)] != -1) {
            const long long d = slack(bestedge_[u(v)]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[u(v)];
            }
          }
        }
        for (int b = 0; b < 2 * nv_; ++b) {
          if (blossomparent_[u(b)] == -1 && label_[u(b)] == 1 && bestedge_[u(b)] != -1) {
            const long long d = slack(bestedge_[u(b)]) / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[u(b)];
            }
          }
        }
        for (int b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[u(b)] >= 0 && blossomparent_[u(b)] == -1 && label_[u(b)] == 2 &&
              (deltatype == -1 || dualvar_[u(b)] < delta)) {
            delta = dualvar_[u(b)];
            deltatype = 4;
            deltablossom = b;
          }
        }
        if (deltatype == -1) {
          deltatype = 1;
          delta = std::max(0LL, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
        }
        for (int v = 0; v < nv_; ++v) {
          const int l = label_[u(inblossom_[u(v)])];
          if (l == 1) dualvar_[u(v)] -= delta;
          else if (l == 2) dualvar_[u(v)] += delta;
        }
        for (int b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[u(b)] >= 0 && blossomparent_[u(b)] == -1) {
            if (label_[u(b)] == 1) dualvar_[u(b)] += delta;
            else if (label_[u(b)] == 2) dualvar_[u(b)] -= delta;
          }
        }
        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[u(deltaedge)] = 1;
          int i = edges_[u(deltaedge)].u, j = edges_[u(deltaedge)].v;
          if (label_[u(inblossom_[u(i)])] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[u(deltaedge)] = 1;
          queue_.push_back(edges_[u(deltaedge)].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (int b = nv_; b < 2 * nv_; ++b)
        if (blossomparent_[u(b)] == -1 && blossombase_[u(b)] >= 0 && label_[u(b)] == 1 && dualvar_[u(b)] == 0)
          expand_blossom(b, true);
    }
    std::vector<int> out(static_cast<std::size_t>(nv_), -1);
    for (int v = 0; v < nv_; ++v)
      if (mate_[u(v)] >= 0) out[u(v)] = endpoint_[u(mate_[u(v)])];
    return out;
  }

 private:
  static std::size_t u(int i) { return static_cast<std::size_t>(i); }

  long long slack(int k) const {
    const auto& e = edges_[u(k)];
    return dualvar_[u(e.u)] + dualvar_[u(e.v)] - 2 * e.w;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[u(b)]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[u(w)];
    label_[u(w)] = label_[u(b)] = t;
    labelend_[u(w)] = labelend_[u(b)] = p;
    bestedge_[u(w)] = bestedge_[u(b)] = -1;
    if (t == 1) {
      leaves(b, queue_);
    } else if (t == 2) {
      const int base = blossombase_[u(b)];
      assign_label(endpoint_[u(mate_[u(base)])], 1, mate_[u(base)] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[u(v)];
      if (label_[u(b)] & 4) {
        base = blossombase_[u(b)];
        break;
      }
      path.push_back(b);
      label_[u(b)] = 5;
      if (labelend_[u(b)] == -1) {
        v = -1;
      } else {
        v = endpoint_[u(labelend_[u(b)])];
        b = inblossom_[u(v)];
        v = endpoint_[u(labelend_[u(b)])];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[u(b)] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[u(k)].u, w = edges_[u(k)].v;
    const int bb = inblossom_[u(base)];
    int bv = inblossom_[u(v)], bw = inblossom_[u(w)];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[u(b)] = base;
    blossomparent_[u(b)] = -1;
    blossomparent_[u(bb)] = b;
    auto& path = blossomchilds_[u(b)];
    auto& endps = blossomendps_[u(b)];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[u(bv)] = b;
      path.push_back(bv);
      endps.push_back(labelend_[u(bv)]);
      v = endpoint_[u(labelend_[u(bv)])];
      bv = inblossom_[u(v)];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[u(bw)] = b;
      path.push_back(bw);
      endps.push_back(labelend_[u(bw)] ^ 1);
      w = endpoint_[u(labelend_[u(bw)])];
      bw = inblossom_[u(w)];
    }
    label_[u(b)] = 1;
    labelend_[u(b)] = labelend_[u(bb)];
    dualvar_[u(b)] = 0;
    for (int leaf : leaves(b)) {
      if (label_[u(inblossom_[u(leaf)])] == 2) queue_.push_back(leaf);
      inblossom_[u(leaf)] = b;
    }
    std::vector<int> bestedgeto(2 * u(nv_), -1);
    for (int child : path) {
      std::vector<std::vector<int>> nblists;
      if (!has_bbe_[u(child)]) {
        for (int leaf : leaves(child)) {
          std::vector<int> l;
          for (int p : neighbend_[u(leaf)]) l.push_back(p / 2);
          nblists.push_back(std::move(l));
        }
      } else {
        nblists.push_back(blossombestedges_[u(child)]);
      }
      for (const auto& nblist : nblists) {
        for (int kk : nblist) {
          int i = edges_[u(kk)].u, j = edges_[u(kk)].v;
          if (inblossom_[u(j)] == b) std::swap(i, j);
          const int bj = inblossom_[u(j)];
          if (bj != b && label_[u(bj)] == 1 &&
              (bestedgeto[u(bj)] == -1 || slack(kk) < slack(bestedgeto[u(bj)])))
            bestedgeto[u(bj)] = kk;
        }
      }
      blossombestedges_[u(child)].clear();
      has_bbe_[u(child)] = 0;
      bestedge_[u(child)] = -1;
    }
    auto& bbe = blossombestedges_[u(b)];
    bbe.clear();
    for (int kk : bestedgeto)
      if (kk != -1) bbe.push_back(kk);
    has_bbe_[u(b)] = 1;
    bestedge_[u(b)] = -1;
    for (int kk : bbe)
      if (bestedge_[u(b)] == -1 || slack(kk) < slack(bestedge_[u(b)])) bestedge_[u(b)] = kk;
  }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> childs = blossomchilds_[u(b)];
    for (int s : childs) {
      blossomparent_[u(s)] = -1;
      if (s < nv_) {
        inblossom_[u(s)] = s;
      } else if (endstage && dualvar_[u(s)] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (int leaf : leaves(s)) inblossom_[u(leaf)] = s;
      }
    }
    if (!endstage && label_[u(b)] == 2) {
      const auto& endps = blossomendps_[u(b)];
      const int len = static_cast<int>(childs.size());
      auto child_at = [&](int j) { return childs[u(((j % len) + len) % len)]; };
      auto endp_at = [&](int j) { return endps[u(((j % len) + len) % len)]; };
      const int entrychild = inblossom_[u(endpoint_[u(labelend_[u(b)] ^ 1)])];
      int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[u(b)];
      while (j != 0) {
        label_[u(endpoint_[u(p ^ 1)])] = 0;
        label_[u(endpoint_[u(endp_at(j - endptrick) ^ endptrick ^ 1)])] = 0;
        assign_label(endpoint_[u(p ^ 1)], 2, p);
        allowedge_[u(endp_at(j - endptrick) / 2)] = 1;
        j += jstep;
        p = endp_at(j - endptrick) ^ endptrick;
        allowedge_[u(p / 2)] = 1;
        j += jstep;
      }
      int bv = child_at(j);
      label_[u(endpoint_[u(p ^ 1)])] = label_[u(bv)] = 2;
      labelend_[u(endpoint_[u(p ^ 1)])] = labelend_[u(bv)] = p;
      bestedge_[u(bv)] = -1;
      j += jstep;
      while (child_at(j) != entrychild) {
        bv = child_at(j);
        if (label_[u(bv)] == 1) {
          j += jstep;
          continue;
        }
        const auto lv = leaves(bv);
        int v = lv.back();
        for (int leaf : lv) {
          if (label_[u(leaf)] != 0) {
            v = leaf;
            break;
          }
        }
        if (label_[u(v)] != 0) {
          label_[u(v)] = 0;
          label_[u(endpoint_[u(mate_[u(blossombase_[u(bv)])])])] = 0;
          assign_label(v, 2, labelend_[u(v)]);
        }
        j += jstep;
      }
    }
    label_[u(b)] = labelend_[u(b)] = -1;
    blossomchilds_[u(b)].clear();
    blossomendps_[u(b)].clear();
    blossombase_[u(b)] = -1;
    blossombestedges_[u(b)].clear();
    has_bbe_[u(b)] = 0;
    bestedge_[u(b)] = -1;
    unused_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[u(t)] != b) t = blossomparent_[u(t)];
    if (t >= nv_) augment_blossom(t, v);
    auto& childs = blossomchilds_[u(b)];
    auto& endps = blossomendps_[u(b)];
    const int len = static_cast<int>(childs.size());
    auto idx = [&](int j) { return u(((j % len) + len) % len); };
    const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = childs[idx(j)];
      const int p = endps[idx(j - endptrick)] ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[u(p)]);
      j += jstep;
      t = childs[idx(j)];
      if (t >= nv_) augment_blossom(t, endpoint_[u(p ^ 1)]);
      mate_[u(endpoint_[u(p)])] = p ^ 1;
      mate_[u(endpoint_[u(p ^ 1)])] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[u(b)] = blossombase_[u(childs[0])];
    assert(blossombase_[u(b)] == v);
  }

  void augment_matching(int k) {
    const int v = edges_[u(k)].u, w = edges_[u(k)].v;
    const std::pair<int, int> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
    for (auto [s, p] : starts) {
      while (true) {
        const int bs = inblossom_[u(s)];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[u(s)] = p;
        if (labelend_[u(bs)] == -1) break;
        const int t = endpoint_[u(labelend_[u(bs)])];
        const int bt = inblossom_[u(t)];
        s = endpoint_[u(labelend_[u(bt)])];
        const int j = endpoint_[u(labelend_[u(bt)] ^ 1)];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[u(j)] = labelend_[u(bt)];
        p = labelend_[u(bt)] ^ 1;
      }
    }
  }

  const std::vector<WeightedEdge>& edges_;
  bool maxcard_;
  int nv_ = 0;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
  std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
  std::vector<char> has_bbe_;
  std::vector<int> unused_;
  std::vector<long long> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

}  // namespace

std::vector<int> max_weight_matching(const std::vector<WeightedEdge>& edges, bool max_cardinality) {
  for (const auto& e : edges)
    if (e.u < 0 || e.v < 0 || e.u == e.v) throw ConfigError("invalid matching edge");
  return BlossomMatcher(edges, max_cardinality).run();
}

}  // namespace dsim

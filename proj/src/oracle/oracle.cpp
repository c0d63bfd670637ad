#include "mpcmst/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <utility>

namespace mpcmst::oracle {

namespace {

class Dsu {
 public:
  explicit Dsu(std::size_t n) : up_(n) { std::iota(up_.begin(), up_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    std::size_t r = x;
    while (up_[r] != r) r = up_[r];
    while (up_[x] != r) x = std::exchange(up_[x], r);
    return r;
  }
  bool join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    up_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> up_;
};

std::size_t ix(Word v) { return static_cast<std::size_t>(v); }

}  // namespace

MstResult mst(const WeightedGraph& g) {
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    const Edge& e = g.edges[i];
    return std::make_tuple(e.w, std::min(e.u, e.v), std::max(e.u, e.v));
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  Dsu dsu(ix(g.n));
  MstResult r;
  for (std::size_t i : order) {
    const Edge& e = g.edges[i];
    if (!dsu.join(ix(e.u), ix(e.v))) continue;
    r.edges.push_back(i);
    r.weight += e.w;
  }
  return r;
}

Forest::Forest(const WeightedGraph& g, bool allow_forest, Word root) {
  const std::size_t n = ix(g.n);
  std::vector<std::vector<std::size_t>> adj(n);
  Dsu dsu(n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (!e.is_tree) continue;
    if (!dsu.join(ix(e.u), ix(e.v))) throw NotSpanning("not a spanning tree: tree edges contain a cycle");
    adj[ix(e.u)].push_back(i);
    adj[ix(e.v)].push_back(i);
  }
  parent_.assign(n, kNone);
  depth_.assign(n, 0);
  comp_.assign(n, kNone);
  up_edge_.assign(n, kNone);
  std::vector<Word> roots;
  if (root >= 0 && ix(root) < n) roots.push_back(root);
  for (std::size_t v = 0; v < n; ++v) roots.push_back(static_cast<Word>(v));
  Word comps = 0;
  for (Word r : roots) {
    if (comp_[ix(r)] != kNone) continue;
    comp_[ix(r)] = comps;
    parent_[ix(r)] = r;
    std::vector<Word> stack{r};
    while (!stack.empty()) {
      Word x = stack.back();
      stack.pop_back();
      for (std::size_t i : adj[ix(x)]) {
        const Edge& e = g.edges[i];
        Word y = e.u == x ? e.v : e.u;
        if (comp_[ix(y)] != kNone) continue;
        comp_[ix(y)] = comps;
        parent_[ix(y)] = x;
        depth_[ix(y)] = depth_[ix(x)] + 1;
        up_edge_[ix(y)] = static_cast<Word>(i);
        stack.push_back(y);
      }
    }
    ++comps;
  }
  if (!allow_forest && comps > 1) throw NotSpanning("not a spanning tree: tree edges are disconnected");
}

Word Forest::lca(Word u, Word v) const {
  if (comp_[ix(u)] != comp_[ix(v)]) return kNone;
  while (depth_[ix(u)] > depth_[ix(v)]) u = parent_[ix(u)];
  while (depth_[ix(v)] > depth_[ix(u)]) v = parent_[ix(v)];
  while (u != v) {
    u = parent_[ix(u)];
    v = parent_[ix(v)];
  }
  return u;
}

std::vector<std::size_t> Forest::path(Word u, Word v) const {
  std::vector<std::size_t> out;
  Word a = lca(u, v);
  if (a == kNone) return out;
  for (Word x = u; x != a; x = parent_[ix(x)]) out.push_back(ix(up_edge_[ix(x)]));
  for (Word x = v; x != a; x = parent_[ix(x)]) out.push_back(ix(up_edge_[ix(x)]));
  return out;
}

Verdict verify(const WeightedGraph& g, bool allow_forest) {
  Verdict r;
  std::optional<Forest> f;
  try {
    f.emplace(g, allow_forest);
  } catch (const NotSpanning& e) {
    r.yes = false;
    r.reason = e.what();
    return r;
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.is_tree) continue;
    if (f->component(e.u) != f->component(e.v)) {
      r.yes = false;
      r.reason = "not a spanning forest: a non-tree edge joins two forest components";
      r.witness_non_tree = i;
      return r;
    }
    for (std::size_t t : f->path(e.u, e.v)) {
      if (g.edges[t].w > e.w && (!r.witness_tree || g.edges[t].w > g.edges[*r.witness_tree].w)) {
        r.witness_tree = t;
      }
    }
    if (r.witness_tree) {
      r.yes = false;
      r.witness_non_tree = i;
      r.reason = "a non-tree edge is lighter than a tree edge it covers";
      return r;
    }
  }
  return r;
}

std::vector<Word> path_max(const WeightedGraph& g, bool allow_forest) {
  Forest f(g, allow_forest);
  std::vector<Word> out(g.edges.size(), kNegInf);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.is_tree) continue;
    for (std::size_t t : f.path(e.u, e.v)) out[i] = std::max(out[i], g.edges[t].w);
  }
  return out;
}

std::vector<Word> min_cover(const WeightedGraph& g, bool allow_forest) {
  Forest f(g, allow_forest);
  std::vector<Word> out(g.edges.size(), kPosInf);
  for (const Edge& e : g.edges) {
    if (e.is_tree) continue;
    for (std::size_t t : f.path(e.u, e.v)) out[t] = std::min(out[t], e.w);
  }
  return out;
}

std::vector<Word> sensitivity(const WeightedGraph& g, bool allow_forest) {
  std::vector<Word> pm = path_max(g, allow_forest);
  std::vector<Word> mc = min_cover(g, allow_forest);
  std::vector<Word> out(g.edges.size(), kPosInf);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.is_tree) {
      if (mc[i] != kPosInf) out[i] = mc[i] - e.w;
    } else if (pm[i] != kNegInf) {
      out[i] = e.w - pm[i];
    }
  }
  return out;
}

std::vector<Word> lca(const WeightedGraph& g, Word root) {
  Forest f(g, false, root);
  std::vector<Word> out(g.edges.size(), kNone);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!g.edges[i].is_tree) out[i] = f.lca(g.edges[i].u, g.edges[i].v);
  return out;
}

}  // namespace mpcmst::oracle

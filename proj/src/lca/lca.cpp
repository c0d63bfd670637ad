#include "mpcmst/lca.hpp"

#include <cmath>

namespace mpcmst {

namespace {

struct Arc {
  Word id;  // 2v is the arc p(v) -> v, 2v+1 the arc v -> p(v)
  Word src;
  Word order;  // -1 for the arc back to src's parent, else the child id
  Word nxt;    // next out-arc of src in cyclic order
  Word succ;   // Euler tour successor; kNone at the end
  Word dist;   // arcs remaining after this one
};

struct LastArc {
  Word src = kNone;
  Word id = kNone;
};

}  // namespace

Stream<VertexRow> dfs_interval_labeling(Simulator& sim, const RootedTree& t) {
  auto phase = sim.phase("dfs_labeling");
  const Word n = t.size();
  const Word root = t.root;
  std::vector<VertexRow> input;
  input.reserve(static_cast<std::size_t>(n));
  for (Word v = 0; v < n; ++v) {
    Word p = v == root ? kNone : t.parent[static_cast<std::size_t>(v)];
    input.push_back(VertexRow{v, p, t.weight[static_cast<std::size_t>(v)], 0, 0});
  }
  auto vertices = sim.scatter(std::move(input));

  auto arcs = sim.local<Arc>(vertices, [](const VertexRow& r, auto& emit) {
    if (r.parent == kNone) return;
    emit(Arc{2 * r.v, r.parent, r.v, kNone, kNone, 0});
    emit(Arc{2 * r.v + 1, r.v, -1, kNone, kNone, 0});
  });
  const Word arc_count = 2 * (n - 1);

  // Descending (src, order): the previous record of the same source is the
  // next out-arc in ascending order.
  arcs = sim.sort(std::move(arcs), [](const Arc& a) { return std::make_pair(-a.src, -a.order); });
  arcs = sim.prefix_aggregate(
      std::move(arcs), LastArc{}, [](const Arc& a) { return LastArc{a.src, a.id}; },
      [](const LastArc&, const LastArc& b) { return b; },
      [root](Arc& a, const LastArc& prev) {
        if (prev.src == a.src) {
          a.nxt = prev.id;
        } else {
          a.nxt = a.src == root ? kNone : 2 * a.src + 1;
        }
      });
  {
    auto providers = sim.copy(arcs);
    arcs = equal_join(
        sim, providers, std::move(arcs), [](const Arc& a) { return make_key(a.id); },
        [](const Arc& a) { return make_key(a.id ^ 1); }, [](Arc& a, const Arc* rev) { a.succ = rev->nxt; });
  }
  sim.update(arcs, [](Arc& a) { a.dist = a.succ == kNone ? 0 : 1; });
  for (Word it = 0, rounds = ceil_log2(arc_count); it < rounds; ++it) {
    auto providers = sim.copy(arcs);
    arcs = equal_join(
        sim, providers, std::move(arcs), [](const Arc& a) { return make_key(a.id); },
        [](const Arc& a) { return make_key(a.succ); },
        [](Arc& a, const Arc* s) {
          if (s == nullptr) return;
          a.dist += s->dist;
          a.succ = s->succ;
        });
  }
  // Tour position is arc_count - 1 - dist; count the down arcs before each.
  arcs = sim.sort(std::move(arcs), [](const Arc& a) { return -a.dist; });
  arcs = sim.prefix_aggregate(
      std::move(arcs), Word{0}, [](const Arc& a) { return Word{(a.id & 1) == 0}; },
      [](Word x, Word y) { return x + y; }, [](Arc& a, Word downs) { a.nxt = downs; });
  vertices = equal_join(
      sim, arcs, std::move(vertices), [](const Arc& a) { return make_key(a.id); },
      [](const VertexRow& r) { return make_key(2 * r.v); },
      [](VertexRow& r, const Arc* a) {
        if (a != nullptr) r.low = a->nxt + 1;
      });
  vertices = equal_join(
      sim, arcs, std::move(vertices), [](const Arc& a) { return make_key(a.id); },
      [](const VertexRow& r) { return make_key(2 * r.v + 1); },
      [n](VertexRow& r, const Arc* a) {
        if (a != nullptr) {
          r.high = a->nxt;
        } else {
          r.low = 0;
          r.high = n - 1;
        }
      });
  return vertices;
}

Word hop_levels(Word d_hat) { return std::max<Word>(1, ceil_log2(d_hat + 1)); }

Stream<HopRow> build_ancestor_table(Simulator& sim, const Stream<ClusterRow>& top, Word d_hat) {
  const Word levels = hop_levels(d_hat);
  auto level = sim.local<HopRow>(top, [](const ClusterRow& c, auto& emit) {
    emit(HopRow{c.leader, 0, c.parent == kNone ? c.leader : c.parent, c.form, c.low, c.high});
  });
  level = equal_join(
      sim, top, std::move(level), [](const ClusterRow& c) { return make_key(c.leader); },
      [](const HopRow& h) { return make_key(h.target); },
      [](HopRow& h, const ClusterRow* c) {
        h.target_form = c->form;
        h.low = c->low;
        h.high = c->high;
      });
  auto table = sim.copy(level);
  for (Word j = 1; j <= levels; ++j) {
    auto providers = sim.copy(level);
    level = equal_join(
        sim, providers, std::move(level), [](const HopRow& h) { return make_key(h.cluster); },
        [](const HopRow& h) { return make_key(h.target); },
        [j](HopRow& h, const HopRow* mid) {
          h.j = j;
          h.target = mid->target;
          h.target_form = mid->target_form;
          h.low = mid->low;
          h.high = mid->high;
        });
    table = sim.concat(std::move(table), sim.copy(level));
  }
  return table;
}

Stream<LcaRow> lca_rows(Simulator& sim, const WeightedGraph& g, const Stream<VertexRow>& vertices) {
  std::vector<LcaRow> input;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.is_tree) continue;
    input.push_back(LcaRow{static_cast<Word>(i), e.u, e.v, e.w, 0, 0, e.u, 0, e.v, 0, 0, 0, 0, 0, kNone, 0, 0, kNone, 0});
  }
  auto rows = sim.scatter(std::move(input));
  rows = equal_join(
      sim, vertices, std::move(rows), [](const VertexRow& r) { return make_key(r.v); },
      [](const LcaRow& r) { return make_key(r.u); }, [](LcaRow& r, const VertexRow* x) { r.du = x->low; });
  rows = equal_join(
      sim, vertices, std::move(rows), [](const VertexRow& r) { return make_key(r.v); },
      [](const LcaRow& r) { return make_key(r.v); }, [](LcaRow& r, const VertexRow* x) { r.dv = x->low; });
  return rows;
}

void advance_lca_rows(Simulator& sim, Stream<LcaRow>& rows, const Stream<StepRow>& steps) {
  auto by_leader = [](const StepRow& s) { return make_key(s.leader); };
  rows = equal_join(sim, steps, std::move(rows), by_leader, [](const LcaRow& r) { return make_key(r.cu); },
                    [](LcaRow& r, const StepRow* s) {
                      r.cu = s->new_leader;
                      r.cuf = s->new_form;
                    });
  rows = equal_join(sim, steps, std::move(rows), by_leader, [](const LcaRow& r) { return make_key(r.cv); },
                    [](LcaRow& r, const StepRow* s) {
                      r.cv = s->new_leader;
                      r.cvf = s->new_form;
                    });
}

Stream<LcaRow> find_lca_clusters(Simulator& sim, Stream<LcaRow> rows, const Stream<ClusterRow>& top,
                                 const Stream<HopRow>& hops, Word d_hat) {
  auto by_leader = [](const ClusterRow& c) { return make_key(c.leader); };
  rows = equal_join(sim, top, std::move(rows), by_leader, [](const LcaRow& r) { return make_key(r.cu); },
                    [](LcaRow& r, const ClusterRow* c) {
                      r.cul = c->low;
                      r.cuh = c->high;
                    });
  rows = equal_join(sim, top, std::move(rows), by_leader, [](const LcaRow& r) { return make_key(r.cv); },
                    [](LcaRow& r, const ClusterRow* c) {
                      r.cvl = c->low;
                      r.cvh = c->high;
                    });
  // Nested intervals: the outer cluster holds the LCA.
  sim.update(rows, [](LcaRow& r) {
    r.res = kNone;
    if (r.cvl <= r.cul && r.cuh <= r.cvh) {
      r.res = r.cv;
      r.res_form = r.cvf;
    } else if (r.cul <= r.cvl && r.cvh <= r.cuh) {
      r.res = r.cu;
      r.res_form = r.cuf;
    } else {
      r.chi = r.cu;
      r.chil = r.cul;
      r.chih = r.cuh;
    }
  });
  // Lift chi as far as its interval stays disjoint from c(v)'s; its parent is
  // then the lowest cluster whose interval reaches c(v).
  auto hop_key = [](const HopRow& h) { return make_key(h.cluster, h.j); };
  for (Word j = hop_levels(d_hat); j >= 0; --j) {
    auto level = sim.local<HopRow>(hops, [j](const HopRow& h, auto& emit) {
      if (h.j == j) emit(h);
    });
    rows = equal_join(sim, level, std::move(rows), hop_key, [j](const LcaRow& r) { return make_key(r.chi, j); },
                      [](LcaRow& r, const HopRow* h) {
                        if (r.res != kNone || h == nullptr) return;
                        if (h->high < r.cvl || h->low > r.cvh) {
                          r.chi = h->target;
                          r.chil = h->low;
                          r.chih = h->high;
                        }
                      });
  }
  rows = equal_join(sim, hops, std::move(rows), hop_key, [](const LcaRow& r) { return make_key(r.chi, 0); },
                    [](LcaRow& r, const HopRow* h) {
                      if (r.res != kNone) return;
                      r.res = h->target;
                      r.res_form = h->target_form;
                    });
  return rows;
}

Stream<LcaRow> undo_clustering(Simulator& sim, Stream<LcaRow> rows, const Stream<SubClusterRow>& subs, Word tau) {
  for (Word i = tau; i >= 1; --i) {
    auto level = sim.local<SubClusterRow>(subs, [i](const SubClusterRow& s, auto& emit) {
      if (s.level == i) emit(s);
    });
    // Predecessor by DFS number within the cluster's sub-clusters: a junior
    // whose interval holds both endpoints contains the LCA, else the senior.
    rows = lookup_join(
        sim, level, std::move(rows), [](const SubClusterRow& s) { return make_key(s.cluster, s.level, s.low); },
        [i](const LcaRow& r) { return make_key(r.res, i, r.du); }, 2,
        [i](LcaRow& r, const SubClusterRow* s) {
          if (r.res_form != i) return;
          if (s == nullptr) throw std::logic_error("no sub-cluster precedes an LCA query");
          bool holds = s->low <= r.du && r.du <= s->high && s->low <= r.dv && r.dv <= s->high;
          if (s->role == kJunior && holds) {
            r.res = s->sub;
            r.res_form = s->sub_form;
          } else {
            r.res_form = s->senior_form;
          }
        });
  }
  return rows;
}

Stream<AdEdgeRow> split_edges(Simulator& sim, const Stream<LcaRow>& resolved) {
  return sim.local<AdEdgeRow>(resolved, [](const LcaRow& r, auto& emit) {
    if (r.res != r.u) emit(AdEdgeRow{r.id, r.u, r.res, r.w, r.du});
    if (r.res != r.v) emit(AdEdgeRow{r.id, r.v, r.res, r.w, r.dv});
  });
}

LcaStage resolve_lcas(Simulator& sim, const WeightedGraph& g, const Stream<VertexRow>& vertices,
                      const LcaParams& params) {
  LcaStage out;
  {
    auto phase = sim.phase("lca_input");
    out.rows = lca_rows(sim, g, vertices);
  }
  Hierarchy h;
  {
    auto phase = sim.phase("lca_hierarchy");
    h = build_hierarchy(sim, initial_clusters(sim, vertices), g.n,
                        HierarchyParams{params.d_hat, params.exponent, params.seed},
                        [&](Word, const Stream<StepRow>& steps) { advance_lca_rows(sim, out.rows, steps); });
  }
  {
    auto phase = sim.phase("lca_ancestor_table");
    auto hops = build_ancestor_table(sim, h.top, params.d_hat);
    auto find = sim.phase("lca_find_clusters");
    out.rows = find_lca_clusters(sim, std::move(out.rows), h.top, hops, params.d_hat);
  }
  { Stream<ClusterRow> done = std::move(h.top); }
  {
    auto phase = sim.phase("lca_undo");
    out.rows = undo_clustering(sim, std::move(out.rows), h.subs, h.tau);
  }
  out.tau = h.tau;
  out.sizes = h.sizes;
  out.subs = std::move(h.subs);
  return out;
}

LcaOutput all_edges_lca(Simulator& sim, const WeightedGraph& g, const RootedTree& t, const LcaParams& params) {
  auto vertices = dfs_interval_labeling(sim, t);
  LcaStage stage = resolve_lcas(sim, g, vertices, params);
  LcaOutput out;
  out.lca.assign(g.edges.size(), kNone);
  for (const LcaRow& r : stage.rows.records()) out.lca[static_cast<std::size_t>(r.id)] = r.res;
  out.tau = stage.tau;
  out.sizes = stage.sizes;
  out.records = stage.subs.collect();
  return out;
}

WeightedGraph to_ancestor_descendant(const WeightedGraph& g, const std::vector<Word>& lca) {
  WeightedGraph out;
  out.n = g.n;
  for (const Edge& e : g.edges)
    if (e.is_tree) out.edges.push_back(e);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.is_tree) continue;
    Word a = lca[i];
    if (a != e.u) out.edges.push_back(Edge{e.u, a, e.w, false, static_cast<Word>(i)});
    if (a != e.v) out.edges.push_back(Edge{e.v, a, e.w, false, static_cast<Word>(i)});
  }
  return out;
}

}  // namespace mpcmst

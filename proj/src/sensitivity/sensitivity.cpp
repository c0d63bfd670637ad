#include "mpcmst/sensitivity.hpp"

#include <algorithm>

namespace mpcmst {

McTracker::McTracker(Simulator& sim, Word n) : sim_(sim) {
  chunk_ = static_cast<std::size_t>(std::max<Word>(1, sim.local_cap() / 2));
  const std::size_t rows = static_cast<std::size_t>(std::max<Word>(n, 1));
  range_ = sim.attach((rows + chunk_ - 1) / chunk_);
  std::vector<McRow> data(rows);
  for (std::size_t v = 0; v < rows; ++v) data[v] = McRow{static_cast<Word>(v), kPosInf};
  std::vector<std::size_t> bounds(sim.machines() + 1, 0);
  for (std::size_t k = 0; k < sim.machines(); ++k) {
    std::size_t held = 0;
    if (k >= range_.begin && k < range_.end) held = std::min(chunk_, rows - (k - range_.begin) * chunk_);
    bounds[k + 1] = bounds[k] + held;
  }
  table_ = sim.place(std::move(data), std::move(bounds));
}

void McTracker::apply(Stream<McRow> updates) {
  updates = keep_first(
      sim_, std::move(updates), [](const McRow& r) { return make_key(r.v); }, [](const McRow& r) { return r.mc; });
  const std::size_t base = range_.begin, chunk = chunk_;
  updates = sim_.exchange(std::move(updates), [base, chunk](const McRow& r, std::size_t) {
    return base + static_cast<std::size_t>(r.v) / chunk;
  });
  for (std::size_t k = range_.begin; k < range_.end; ++k) {
    auto rows = sim_.mutable_machine(table_, k);
    const Word first = static_cast<Word>((k - range_.begin) * chunk_);
    for (const McRow& u : updates.machine(k)) {
      Word& slot = rows[static_cast<std::size_t>(u.v - first)].mc;
      slot = std::min(slot, u.mc);
      if (audit_ != nullptr) audit_->push_back(u);
    }
  }
  applied_ += static_cast<Word>(updates.size());
}

std::vector<Word> McTracker::values() const {
  std::vector<Word> out;
  for (const McRow& r : table_.records()) out.push_back(r.mc);
  return out;
}

Stream<CoverEdge> cover_edges(Simulator& sim, const Stream<AdEdgeRow>& halves) {
  auto edges = sim.local<CoverEdge>(halves, [](const AdEdgeRow& e, auto& emit) {
    emit(CoverEdge{e.desc, e.anc, e.w, e.desc_low, e.desc, e.anc});
  });
  return keep_first(
      sim, std::move(edges), [](const CoverEdge& e) { return make_key(e.desc, e.anc); },
      [](const CoverEdge& e) { return e.w; });
}

Stream<NoteRow> dedupe_notes(Simulator& sim, Stream<NoteRow> notes) {
  notes = sim.filter(std::move(notes), [](const NoteRow& n) { return n.root != n.leaf; });
  return keep_first(
      sim, std::move(notes), [](const NoteRow& n) { return make_key(n.root, n.leaf, n.step); },
      [](const NoteRow& n) { return n.w; });
}

namespace {

// An edge plus the step rows it needs: c(desc), c(anc), the child z of c(anc)
// toward desc, and the child of z toward desc.
struct CoverWork {
  CoverEdge e;
  Word x_role;
  Word x_parent;
  Word x_new;
  Word x_new_form;
  Word x_pv;
  Word x_pv_low;
  Word y_role;
  Word y_new;
  Word z;
  Word z_role;
  Word z_form;
  Word z2_pv;
  Word z2_pv_low;
};

enum : Word { kSettled = 1, kDescCut = 2, kAncCut = 4 };

Word classify(const CoverWork& x) {
  if (x.x_role == kJunior && x.x_parent == x.e.ca) return kSettled;
  Word c = 0;
  if (x.x_role == kJunior) c |= kDescCut;
  if (x.y_role == kSenior && x.z_role == kJunior) c |= kAncCut;
  return c;
}

}  // namespace

void contract_cover_edges(Simulator& sim, Stream<CoverEdge>& edges, Stream<NoteRow>& notes, McTracker& mc,
                          const Stream<StepRow>& steps) {
  auto work = sim.consume<CoverWork>(std::move(edges), [](const CoverEdge& e, auto& emit) {
    emit(CoverWork{e, kKept, kNone, e.cd, 0, kNone, kNone, kKept, e.ca, kNone, kKept, 0, kNone, kNone});
  });
  auto by_leader = [](const StepRow& s) { return make_key(s.leader); };
  auto by_child = [](const StepRow& s) { return make_key(s.parent, s.low); };
  work = equal_join(sim, steps, std::move(work), by_leader, [](const CoverWork& x) { return make_key(x.e.cd); },
                    [](CoverWork& x, const StepRow* s) {
                      x.x_role = s->role;
                      x.x_parent = s->parent;
                      x.x_new = s->new_leader;
                      x.x_new_form = s->new_form;
                      x.x_pv = s->parent_vertex;
                      x.x_pv_low = s->pv_low;
                    });
  work = equal_join(sim, steps, std::move(work), by_leader, [](const CoverWork& x) { return make_key(x.e.ca); },
                    [](CoverWork& x, const StepRow* s) {
                      x.y_role = s->role;
                      x.y_new = s->new_leader;
                    });
  work = lookup_join(sim, steps, std::move(work), by_child,
                     [](const CoverWork& x) { return make_key(x.e.ca, x.e.desc_low); }, 1,
                     [](CoverWork& x, const StepRow* s) {
                       if (s == nullptr) throw std::logic_error("cover edge has no child cluster toward its desc");
                       x.z = s->leader;
                       x.z_role = s->role;
                       x.z_form = s->form;
                     });
  work = lookup_join(sim, steps, std::move(work), by_child,
                     [](const CoverWork& x) { return make_key(x.z, x.e.desc_low); }, 1,
                     [](CoverWork& x, const StepRow* s) {
                       if (x.z == x.e.cd || s == nullptr) return;
                       x.z2_pv = s->parent_vertex;
                       x.z2_pv_low = s->pv_low;
                     });
  auto updates = sim.local<McRow>(work, [](const CoverWork& x, auto& emit) {
    Word c = classify(x);
    if (c & (kSettled | kDescCut)) emit(McRow{x.e.desc, x.e.w});
    if (c & kAncCut) emit(McRow{x.z, x.e.w});
  });
  mc.apply(std::move(updates));
  auto fresh = sim.local<NoteRow>(work, [](const CoverWork& x, auto& emit) {
    Word c = classify(x);
    if (c & kDescCut) emit(NoteRow{x.x_new, x.x_pv, x.x_pv_low, x.x_new_form, x.e.w});
    if (c & kAncCut) emit(NoteRow{x.z, x.z2_pv, x.z2_pv_low, x.z_form, x.e.w});
  });
  notes = dedupe_notes(sim, sim.concat(std::move(notes), std::move(fresh)));
  edges = sim.consume<CoverEdge>(std::move(work), [](const CoverWork& x, auto& emit) {
    Word c = classify(x);
    if (c & kSettled) return;
    CoverEdge e = x.e;
    if (c & kDescCut) e.desc = x.x_new;
    if (c & kAncCut) e.anc = x.z2_pv;
    e.cd = x.x_new;
    e.ca = x.y_new;
    emit(e);
  });
}

namespace {

struct TopArc {
  CoverEdge e;
  Word v_prime;
  Word lev_ca;
};

// Buckets (tag 0) and array entries (tag 1) of the per-cluster depth arrays.
struct ArrayRow {
  Word cluster;
  Word k;
  Word tag;
  Word val;
  Word lev;
};

struct SegMin {
  Word cluster = kNone;
  Word val = kPosInf;
};

struct TopNote {
  ClusterRow c;
  Word min_a;
};

}  // namespace

Stream<NoteRow> cluster_sensitivity(Simulator& sim, Stream<CoverEdge> edges, const Stream<ClusterRow>& top,
                                    const Stream<LevelRow>& levels, const Stream<PathRow>& paths, Word tau,
                                    McTracker& mc) {
  // Split off the topmost arc: v' is the leader of the child cluster of c(anc)
  // holding desc, and {v', anc} is a cluster-tree edge.
  auto arcs = sim.consume<TopArc>(std::move(edges), [](const CoverEdge& e, auto& emit) {
    emit(TopArc{e, kNone, 0});
  });
  arcs = lookup_join(
      sim, top, std::move(arcs), [](const ClusterRow& c) { return make_key(c.parent, c.low); },
      [](const TopArc& a) { return make_key(a.e.ca, a.e.desc_low); }, 1,
      [](TopArc& a, const ClusterRow* c) {
        if (c == nullptr) throw std::logic_error("cover edge has no child cluster toward its desc");
        a.v_prime = c->leader;
      });
  arcs = equal_join(
      sim, levels, std::move(arcs), [](const LevelRow& l) { return make_key(l.cluster); },
      [](const TopArc& a) { return make_key(a.e.ca); }, [](TopArc& a, const LevelRow* l) { a.lev_ca = l->lev; });
  mc.apply(sim.local<McRow>(arcs, [](const TopArc& a, auto& emit) { emit(McRow{a.v_prime, a.e.w}); }));

  // The remaining arc {desc, v'} covers the cluster edges of c(desc)'s
  // ancestors strictly below c(v'): array positions lev(c(v')) + 1 and up.
  auto rows = sim.consume<ArrayRow>(std::move(arcs), [](const TopArc& a, auto& emit) {
    if (a.e.desc != a.v_prime) emit(ArrayRow{a.e.cd, a.lev_ca + 2, 0, a.e.w, 0});
  });
  auto entries = sim.fan_out<ArrayRow>(
      levels, [](const LevelRow& l) { return l.lev; },
      [](const LevelRow& l, Word j) { return ArrayRow{l.cluster, j + 1, 1, kPosInf, l.lev}; });
  rows = sim.concat(std::move(rows), std::move(entries));
  rows = sim.sort(std::move(rows), [](const ArrayRow& r) { return make_key(r.cluster, r.k, r.tag); });
  rows = sim.prefix_aggregate(
      std::move(rows), SegMin{}, [](const ArrayRow& r) { return SegMin{r.cluster, r.val}; },
      [](const SegMin& a, const SegMin& b) { return a.cluster == b.cluster ? SegMin{b.cluster, std::min(a.val, b.val)} : b; },
      [](ArrayRow& r, const SegMin& acc) {
        if (r.tag == 1 && acc.cluster == r.cluster) r.val = acc.val;
      });
  rows = sim.filter(std::move(rows), [](const ArrayRow& r) { return r.tag == 1 && r.val != kPosInf; });

  // A_c[k] belongs to the ancestor of c at level k.
  rows = equal_join(
      sim, paths, std::move(rows), [](const PathRow& p) { return make_key(p.cluster, p.k); },
      [](const ArrayRow& r) { return make_key(r.cluster, r.lev - r.k); },
      [](ArrayRow& r, const PathRow* p) {
        if (p == nullptr) throw std::logic_error("array entry has no root path entry");
        r.cluster = p->anc;
      });
  rows = keep_first(
      sim, std::move(rows), [](const ArrayRow& r) { return make_key(r.cluster); },
      [](const ArrayRow& r) { return r.val; });

  auto tops = sim.local<TopNote>(top, [](const ClusterRow& c, auto& emit) {
    if (c.parent != kNone) emit(TopNote{c, kPosInf});
  });
  tops = equal_join(
      sim, rows, std::move(tops), [](const ArrayRow& r) { return make_key(r.cluster); },
      [](const TopNote& t) { return make_key(t.c.leader); },
      [](TopNote& t, const ArrayRow* r) {
        if (r != nullptr) t.min_a = r->val;
      });
  { Stream<ArrayRow> done = std::move(rows); }
  tops = sim.filter(std::move(tops), [](const TopNote& t) { return t.min_a != kPosInf; });
  mc.apply(sim.local<McRow>(tops, [](const TopNote& t, auto& emit) { emit(McRow{t.c.leader, t.min_a}); }));
  auto notes = sim.consume<NoteRow>(std::move(tops), [tau](const TopNote& t, auto& emit) {
    emit(NoteRow{t.c.parent, t.c.parent_vertex, t.c.pv_low, tau, t.min_a});
  });
  return dedupe_notes(sim, std::move(notes));
}

namespace {

struct NoteWork {
  NoteRow n;
  Word hit;
  SubClusterRow s;
};

}  // namespace

void undo_contractions(Simulator& sim, Stream<NoteRow> notes, const Stream<SubClusterRow>& subs, Word tau,
                       McTracker& mc, Word& note_peak) {
  note_peak = std::max(note_peak, static_cast<Word>(notes.size()));
  for (Word i = tau; i >= 1; --i) {
    auto level = sim.local<SubClusterRow>(subs, [i](const SubClusterRow& s, auto& emit) {
      if (s.level == i) emit(s);
    });
    auto work = sim.consume<NoteWork>(std::move(notes), [](const NoteRow& n, auto& emit) {
      emit(NoteWork{n, 0, SubClusterRow{}});
    });
    // Among the sub-clusters of (root, i), the predecessor of the leaf by DFS
    // number is the junior holding it, or some sub-cluster not holding it, in
    // which case the leaf lies in the senior.
    work = lookup_join(
        sim, level, std::move(work), [](const SubClusterRow& s) { return make_key(s.cluster, s.level, s.low); },
        [i](const NoteWork& w) { return make_key(w.n.root, i, w.n.leaf_low); }, 2,
        [i](NoteWork& w, const SubClusterRow* s) {
          if (s == nullptr || w.n.step < i) return;
          w.hit = 1;
          w.s = *s;
        });
    { Stream<SubClusterRow> done = std::move(level); }
    auto inside_junior = [](const NoteWork& w) {
      return w.hit != 0 && w.s.role == kJunior && w.n.leaf_low <= w.s.high;
    };
    mc.apply(sim.local<McRow>(work, [&](const NoteWork& w, auto& emit) {
      if (inside_junior(w)) emit(McRow{w.s.sub, w.n.w});
    }));
    notes = sim.consume<NoteRow>(std::move(work), [&](const NoteWork& w, auto& emit) {
      if (w.hit == 0) {
        emit(w.n);
      } else if (inside_junior(w)) {
        emit(NoteRow{w.n.root, w.s.parent_vertex, w.s.pv_low, w.s.senior_form, w.n.w});
        emit(NoteRow{w.s.sub, w.n.leaf, w.n.leaf_low, w.s.sub_form, w.n.w});
      } else {
        emit(NoteRow{w.n.root, w.n.leaf, w.n.leaf_low, w.s.senior_form, w.n.w});
      }
    });
    note_peak = std::max(note_peak, static_cast<Word>(notes.size()));
    notes = dedupe_notes(sim, std::move(notes));
  }
  if (!notes.empty()) throw std::logic_error("dangling note: no sub-cluster contains its leaf");
}

namespace {

struct OriginMax {
  Word origin;
  Word w;
  Word pm;
};

}  // namespace

SensitivityResult sensitivity_tree(Simulator& sim, const WeightedGraph& g, const RootedTree& t,
                                   const SensitivityParams& params) {
  SensitivityResult out;
  McTracker tracker(sim, g.n);
  tracker.audit_into(params.audit);
  auto vertices = dfs_interval_labeling(sim, t);
  Stream<AdEdgeRow> split;
  {
    LcaStage lca = resolve_lcas(sim, g, vertices, LcaParams{params.d_hat, params.exponent, mix_seed(params.seed, 1)});
    auto phase = sim.phase("split_edges");
    split = split_edges(sim, lca.rows);
  }
  auto halves = init_labels(sim, split);
  Stream<CoverEdge> edges;
  {
    auto phase = sim.phase("contraction");
    edges = cover_edges(sim, split);
  }
  { Stream<AdEdgeRow> done = std::move(split); }
  auto notes = sim.empty_stream<NoteRow>();
  Hierarchy h;
  {
    auto phase = sim.phase("contraction");
    h = build_hierarchy(sim, initial_clusters(sim, vertices), g.n,
                        HierarchyParams{params.d_hat, params.exponent, mix_seed(params.seed, 2)},
                        [&](Word, const Stream<StepRow>& steps) {
                          contract_labels(sim, halves, steps);
                          contract_cover_edges(sim, edges, notes, tracker, steps);
                          out.note_peak = std::max(out.note_peak, static_cast<Word>(notes.size()));
                        });
  }
  { Stream<VertexRow> done = std::move(vertices); }
  out.tau = h.tau;
  out.sizes = h.sizes;
  Stream<LevelRow> levels;
  Stream<PathRow> paths;
  {
    auto phase = sim.phase("path_collection");
    levels = cluster_levels(sim, h.top);
    paths = collect_root_paths(sim, h.top, levels);
  }
  Stream<OriginMax> nontree;
  {
    auto phase = sim.phase("nontree_sensitivity");
    auto pm = evaluate_path_max(sim, std::move(halves), paths);
    auto per_origin = sim.consume<OriginMax>(std::move(pm), [](const PathMaxRow& r, auto& emit) {
      emit(OriginMax{r.origin, r.w, r.pm});
    });
    nontree = keep_first(
        sim, std::move(per_origin), [](const OriginMax& r) { return make_key(r.origin); },
        [](const OriginMax& r) { return -r.pm; });
  }
  {
    auto phase = sim.phase("cluster_sensitivity");
    auto top_notes = cluster_sensitivity(sim, std::move(edges), h.top, levels, paths, h.tau, tracker);
    notes = dedupe_notes(sim, sim.concat(std::move(notes), std::move(top_notes)));
    out.note_peak = std::max(out.note_peak, static_cast<Word>(notes.size()));
  }
  { Stream<PathRow> done = std::move(paths); }
  { Stream<LevelRow> done = std::move(levels); }
  {
    auto phase = sim.phase("unwind");
    undo_contractions(sim, std::move(notes), h.subs, h.tau, tracker, out.note_peak);
  }

  const std::size_t m = g.edges.size();
  out.sens.assign(m, kPosInf);
  out.mc.assign(m, kPosInf);
  for (const OriginMax& r : nontree.records()) {
    Word s = r.w - r.pm;
    out.sens[static_cast<std::size_t>(r.origin)] = s;
    if (s < 0) out.is_mst = false;
  }
  std::vector<Word> mc = tracker.values();
  for (Word v = 0; v < t.size(); ++v) {
    Word e = t.parent_edge[static_cast<std::size_t>(v)];
    if (e == kNone) continue;
    Word c = mc[static_cast<std::size_t>(v)];
    out.mc[static_cast<std::size_t>(e)] = c;
    out.sens[static_cast<std::size_t>(e)] = c == kPosInf ? kPosInf : c - g.edges[static_cast<std::size_t>(e)].w;
  }
  return out;
}

}  // namespace mpcmst

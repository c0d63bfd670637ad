#include "mpcmst/verification.hpp"

namespace mpcmst {

Stream<HalfRow> init_labels(Simulator& sim, const Stream<AdEdgeRow>& halves) {
  return sim.local<HalfRow>(halves, [](const AdEdgeRow& e, auto& emit) {
    emit(HalfRow{e.origin, e.desc, e.anc, e.w, e.desc_low, e.desc, e.anc, kNegInf, kNone, kNegInf, kNone});
  });
}

namespace {

// A half plus what one step needs: the step rows of c(desc) and c(anc), the
// child z of c(anc) toward desc, and the child of z toward desc.
struct LabelWork {
  HalfRow h;
  Word x_role;
  Word x_parent;
  Word x_up;
  Word x_thr_w;
  Word x_thr_arg;
  Word x_new;
  Word y_role;
  Word y_new;
  Word z;
  Word z_role;
  Word z_up;
  Word z2_thr_w;
  Word z2_thr_arg;
};

}  // namespace

void contract_labels(Simulator& sim, Stream<HalfRow>& halves, const Stream<StepRow>& steps) {
  auto work = sim.consume<LabelWork>(std::move(halves), [](const HalfRow& h, auto& emit) {
    emit(LabelWork{h, kKept, kNone, kNegInf, kNegInf, kNone, h.cd, kKept, h.ca, kNone, kKept, kNegInf, kNegInf, kNone});
  });
  auto by_leader = [](const StepRow& s) { return make_key(s.leader); };
  auto by_child = [](const StepRow& s) { return make_key(s.parent, s.low); };
  work = equal_join(sim, steps, std::move(work), by_leader, [](const LabelWork& x) { return make_key(x.h.cd); },
                    [](LabelWork& x, const StepRow* s) {
                      x.x_role = s->role;
                      x.x_parent = s->parent;
                      x.x_up = s->w_up;
                      x.x_thr_w = s->thr_w;
                      x.x_thr_arg = s->thr_arg;
                      x.x_new = s->new_leader;
                    });
  work = equal_join(sim, steps, std::move(work), by_leader, [](const LabelWork& x) { return make_key(x.h.ca); },
                    [](LabelWork& x, const StepRow* s) {
                      x.y_role = s->role;
                      x.y_new = s->new_leader;
                    });
  // Children of a cluster have disjoint intervals, so the predecessor by DFS
  // number among them is the one holding desc.
  work = lookup_join(sim, steps, std::move(work), by_child,
                     [](const LabelWork& x) { return make_key(x.h.ca, x.h.desc_low); }, 1,
                     [](LabelWork& x, const StepRow* s) {
                       if (x.h.cd == x.h.ca || s == nullptr) return;
                       x.z = s->leader;
                       x.z_role = s->role;
                       x.z_up = s->w_up;
                     });
  work = lookup_join(sim, steps, std::move(work), by_child,
                     [](const LabelWork& x) { return make_key(x.z, x.h.desc_low); }, 1,
                     [](LabelWork& x, const StepRow* s) {
                       if (x.z == kNone || x.z == x.h.cd || s == nullptr) return;
                       x.z2_thr_w = s->thr_w;
                       x.z2_thr_arg = s->thr_arg;
                     });
  halves = sim.consume<HalfRow>(std::move(work), [](const LabelWork& x, auto& emit) {
    HalfRow h = x.h;
    MaxArg od{h.out_d, h.out_d_arg}, oa{h.out_a, h.out_a_arg};
    if (h.cd != h.ca) {
      if (x.x_role == kJunior && x.x_parent == h.ca) {
        // desc's cluster merges into anc's: the one connecting edge joins
        // the two inner segments.
        od = oa = max_of(max_of(od, MaxArg{x.x_up, h.cd}), oa);
      } else {
        if (x.x_role == kJunior) od = max_of(max_of(od, MaxArg{x.x_up, h.cd}), MaxArg{x.x_thr_w, x.x_thr_arg});
        if (x.y_role == kSenior && x.z_role == kJunior)
          oa = max_of(max_of(oa, MaxArg{x.z_up, x.z}), MaxArg{x.z2_thr_w, x.z2_thr_arg});
      }
    }
    h.out_d = od.w;
    h.out_d_arg = od.arg;
    h.out_a = oa.w;
    h.out_a_arg = oa.arg;
    h.cd = x.x_new;
    h.ca = x.y_new;
    emit(h);
  });
}

namespace {

struct JumpRow {
  Word cluster;
  Word jump;
  Word dist;
};

}  // namespace

Stream<LevelRow> cluster_levels(Simulator& sim, const Stream<ClusterRow>& top) {
  auto rows = sim.local<JumpRow>(top, [](const ClusterRow& c, auto& emit) {
    emit(JumpRow{c.leader, c.parent, c.parent == kNone ? 0 : 1});
  });
  auto active = [&] {
    auto pending = sim.local<JumpRow>(rows, [](const JumpRow& r, auto& emit) {
      if (r.jump != kNone) emit(r);
    });
    return sim.count(pending) > 0;
  };
  while (active()) {
    auto providers = sim.copy(rows);
    rows = equal_join(
        sim, providers, std::move(rows), [](const JumpRow& r) { return make_key(r.cluster); },
        [](const JumpRow& r) { return make_key(r.jump); },
        [](JumpRow& r, const JumpRow* p) {
          if (p == nullptr) return;
          r.dist += p->dist;
          r.jump = p->jump;
        });
  }
  return sim.consume<LevelRow>(std::move(rows), [](const JumpRow& r, auto& emit) { emit(LevelRow{r.cluster, r.dist}); });
}

namespace {

// Concatenates the path of a (length a.k) with the path starting at its end.
PathRow compose(const PathRow& a, const PathRow& b) {
  if (a.k == 0) {
    PathRow r = b;
    r.cluster = a.cluster;
    return r;
  }
  if (b.k == 0) return a;
  MaxArg up = max_of(MaxArg{a.up_w, a.up_arg}, MaxArg{b.up_w, b.up_arg});
  MaxArg thr = max_of(MaxArg{a.thr_w, a.thr_arg}, MaxArg{b.thr_w, b.thr_arg});
  MaxArg excl = max_of(MaxArg{a.thr_w, a.thr_arg}, MaxArg{b.thr_excl_w, b.thr_excl_arg});
  return PathRow{a.cluster, a.k + b.k, b.anc, up.w, up.arg, thr.w, thr.arg, excl.w, excl.arg};
}

struct Jump {
  PathRow p;  // the 2^t-th ancestor path
  Word lev;
};

struct Fetch {
  PathRow p;
  Word k;  // entry of p.anc to append
};

}  // namespace

Stream<PathRow> collect_root_paths(Simulator& sim, const Stream<ClusterRow>& top, const Stream<LevelRow>& levels) {
  auto paths = sim.local<PathRow>(top, [](const ClusterRow& c, auto& emit) {
    emit(PathRow{c.leader, 0, c.leader, kNegInf, kNone, kNegInf, kNone, kNegInf, kNone});
  });
  auto jumps = sim.local<Jump>(top, [](const ClusterRow& c, auto& emit) {
    if (c.parent == kNone) return;
    emit(Jump{PathRow{c.leader, 1, c.parent, c.w_up, c.leader, c.thr_w, c.thr_arg, kNegInf, kNone}, 0});
  });
  jumps = equal_join(
      sim, levels, std::move(jumps), [](const LevelRow& l) { return make_key(l.cluster); },
      [](const Jump& j) { return make_key(j.p.cluster); }, [](Jump& j, const LevelRow* l) { j.lev = l->lev; });
  // Entries cover distances [0, s); each round appends [s, 2s) and doubles
  // the jumps that stay inside the tree.
  for (Word s = 1; sim.count(jumps) > 0; s *= 2) {
    auto fetch = sim.fan_out<Fetch>(
        jumps, [s](const Jump& j) { return std::min(s, j.lev - s + 1); },
        [](const Jump& j, Word k) { return Fetch{j.p, k}; });
    auto found = equal_join(
        sim, paths, std::move(fetch), [](const PathRow& p) { return make_key(p.cluster, p.k); },
        [](const Fetch& f) { return make_key(f.p.anc, f.k); }, [](Fetch& f, const PathRow* p) { f.p = compose(f.p, *p); });
    paths = sim.concat(std::move(paths), sim.consume<PathRow>(std::move(found), [](const Fetch& f, auto& emit) {
      emit(f.p);
    }));
    auto providers = sim.copy(jumps);
    jumps = equal_join(
        sim, providers, std::move(jumps), [](const Jump& j) { return make_key(j.p.cluster); },
        [](const Jump& j) { return make_key(j.p.anc); },
        [](Jump& j, const Jump* next) {
          if (next == nullptr) {
            j.lev = kNone;
          } else {
            j.p = compose(j.p, next->p);
          }
        });
    jumps = sim.filter(std::move(jumps), [](const Jump& j) { return j.lev != kNone; });
  }
  return paths;
}

Stream<PathMaxRow> evaluate_path_max(Simulator& sim, Stream<HalfRow> halves, const Stream<PathRow>& paths) {
  halves = equal_join(
      sim, paths, std::move(halves), [](const PathRow& p) { return make_key(p.cluster, p.anc); },
      [](const HalfRow& h) { return make_key(h.cd, h.ca); },
      [](HalfRow& h, const PathRow* p) {
        if (p == nullptr) throw std::logic_error("no root path entry joins the clusters of a half edge");
        // Reuse out_d for the combined maximum.
        MaxArg m = max_of(max_of(MaxArg{h.out_d, h.out_d_arg}, MaxArg{h.out_a, h.out_a_arg}),
                          max_of(MaxArg{p->up_w, p->up_arg}, MaxArg{p->thr_excl_w, p->thr_excl_arg}));
        h.out_d = m.w;
        h.out_d_arg = m.arg;
      });
  return sim.consume<PathMaxRow>(std::move(halves), [](const HalfRow& h, auto& emit) {
    emit(PathMaxRow{h.origin, h.desc, h.anc, h.w, h.out_d, h.out_d_arg});
  });
}

VerifyResult verify_tree(Simulator& sim, const WeightedGraph& g, const RootedTree& t, const VerifyParams& params) {
  VerifyResult out;
  out.path_max.assign(g.edges.size(), kNegInf);
  auto vertices = dfs_interval_labeling(sim, t);
  Stream<AdEdgeRow> split;
  {
    LcaStage lca = resolve_lcas(sim, g, vertices, LcaParams{params.d_hat, params.exponent, mix_seed(params.seed, 1)});
    auto phase = sim.phase("split_edges");
    split = split_edges(sim, lca.rows);
  }
  auto halves = init_labels(sim, split);
  { Stream<AdEdgeRow> done = std::move(split); }
  Hierarchy h;
  {
    auto phase = sim.phase("contraction");
    h = build_hierarchy(sim, initial_clusters(sim, vertices), g.n,
                        HierarchyParams{params.d_hat, params.exponent, mix_seed(params.seed, 2)},
                        [&](Word, const Stream<StepRow>& steps) { contract_labels(sim, halves, steps); });
  }
  { Stream<VertexRow> done = std::move(vertices); }
  { Stream<SubClusterRow> done = std::move(h.subs); }
  out.tau = h.tau;
  out.sizes = h.sizes;
  Stream<PathRow> paths;
  {
    auto phase = sim.phase("path_collection");
    auto levels = cluster_levels(sim, h.top);
    paths = collect_root_paths(sim, h.top, levels);
  }
  auto phase = sim.phase("verify_eval");
  auto pm = evaluate_path_max(sim, std::move(halves), paths);
  auto violations = sim.local<PathMaxRow>(pm, [](const PathMaxRow& r, auto& emit) {
    if (r.w < r.pm) emit(r);
  });
  if (sim.count(violations) > 0) {
    auto first = keep_first(
        sim, std::move(violations), [](const PathMaxRow&) { return make_key(0); },
        [](const PathMaxRow& r) { return std::make_pair(r.origin, -r.pm); });
    const PathMaxRow& r = first.records().front();
    out.yes = false;
    out.witness_non_tree = static_cast<std::size_t>(r.origin);
    out.witness_tree = static_cast<std::size_t>(t.parent_edge[static_cast<std::size_t>(r.pm_arg)]);
  }
  for (const PathMaxRow& r : pm.records()) {
    Word& slot = out.path_max[static_cast<std::size_t>(r.origin)];
    slot = std::max(slot, r.pm);
  }
  return out;
}

}  // namespace mpcmst

#include "mpcmst/clustering.hpp"

#include <cmath>
#include <unordered_map>

#include "json.hpp"

namespace mpcmst {

Word HierarchyParams::target(Word n) const {
  double shrink = std::pow(static_cast<double>(d_hat), exponent);
  if (shrink <= 1.0) return std::max<Word>(1, n);
  return std::max<Word>(1, static_cast<Word>(std::floor(static_cast<double>(n) / shrink)));
}

Word HierarchyParams::step_cap() const {
  return 64 * static_cast<Word>(std::ceil(std::log2(static_cast<double>(d_hat) + 2.0)));
}

bool coin_heads(std::uint64_t seed, Word step, Word leader) {
  return (mix_seed(seed, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(leader)) & 1U) != 0;
}

Stream<ClusterRow> initial_clusters(Simulator& sim, const Stream<VertexRow>& vertices) {
  auto rows = sim.local<ClusterRow>(vertices, [](const VertexRow& r, auto& emit) {
    emit(ClusterRow{r.v, 0, r.parent, r.parent, kNone, r.w_up, kNegInf, kNone, r.low, r.high});
  });
  return equal_join(
      sim, vertices, std::move(rows), [](const VertexRow& r) { return make_key(r.v); },
      [](const ClusterRow& c) { return make_key(c.parent); },
      [](ClusterRow& c, const VertexRow* p) {
        if (p != nullptr) c.pv_low = p->low;
      });
}

namespace {

// A cluster row plus what a step needs to know about its parent.
struct Work {
  ClusterRow c;
  Word junior;
  Word senior;
  Word parent_junior;
  Word pp;  // parent's parent
  Word p_form;
  Word p_low;
  Word p_w_up;
  Word p_thr_w;
  Word p_thr_arg;
};

}  // namespace

StepResult contraction_step(Simulator& sim, Stream<ClusterRow> clusters, Word level, std::uint64_t seed) {
  auto work = sim.local<Work>(clusters, [&](const ClusterRow& c, auto& emit) {
    Work w{c, 0, 0, 0, kNone, kNone, kNone, 0, kNegInf, kNone};
    w.junior = c.parent != kNone && coin_heads(seed, level, c.leader) && !coin_heads(seed, level, c.parent);
    emit(w);
  });
  work = equal_join(
      sim, clusters, std::move(work), [](const ClusterRow& c) { return make_key(c.leader); },
      [](const Work& w) { return make_key(w.c.parent); },
      [&](Work& w, const ClusterRow* p) {
        if (p == nullptr) return;
        w.pp = p->parent;
        w.p_form = p->form;
        w.p_low = p->low;
        w.p_w_up = p->w_up;
        w.p_thr_w = p->thr_w;
        w.p_thr_arg = p->thr_arg;
        w.parent_junior = p->parent != kNone && coin_heads(seed, level, p->leader) && !coin_heads(seed, level, p->parent);
      });
  { Stream<ClusterRow> done = std::move(clusters); }
  {
    auto juniors = sim.local<Work>(work, [](const Work& w, auto& emit) {
      if (w.junior) emit(w);
    });
    work = equal_join(
        sim, juniors, std::move(work), [](const Work& j) { return make_key(j.c.parent); },
        [](const Work& w) { return make_key(w.c.leader); }, [](Work& w, const Work* j) { w.senior = j != nullptr; });
  }

  StepResult out;
  out.steps = sim.local<StepRow>(work, [&](const Work& w, auto& emit) {
    const ClusterRow& c = w.c;
    Word role = w.junior ? kJunior : (w.senior ? kSenior : kKept);
    emit(StepRow{c.leader, c.form, role, w.junior ? c.parent : c.leader, role == kKept ? c.form : level, c.parent,
                 w.p_form, w.p_low, c.parent_vertex, c.pv_low, c.w_up, c.thr_w, c.thr_arg, c.low, c.high});
  });
  out.subs = sim.local<SubClusterRow>(work, [&](const Work& w, auto& emit) {
    const ClusterRow& c = w.c;
    if (w.junior) {
      emit(SubClusterRow{c.parent, level, c.leader, c.form, kJunior, c.low, c.high, c.parent_vertex, c.pv_low,
                         w.p_form});
    } else if (w.senior) {
      emit(SubClusterRow{c.leader, level, c.leader, c.form, kSenior, c.low, c.high, c.parent_vertex, c.pv_low,
                         c.form});
    }
  });
  out.next = sim.consume<ClusterRow>(std::move(work), [&](const Work& w, auto& emit) {
    if (w.junior) return;
    ClusterRow c = w.c;
    if (w.senior) c.form = level;
    if (w.parent_junior) {
      // The parent joins its own parent's cluster; the path from the new
      // parent's leader down to parent_vertex now runs through it.
      MaxArg thr = max_of(max_of(MaxArg{w.p_thr_w, w.p_thr_arg}, MaxArg{w.p_w_up, c.parent}), MaxArg{c.thr_w, c.thr_arg});
      c.parent = w.pp;
      c.thr_w = thr.w;
      c.thr_arg = thr.arg;
    }
    emit(c);
  });
  out.next_size = sim.count(out.next);
  return out;
}

Hierarchy build_hierarchy(Simulator& sim, Stream<ClusterRow> initial, Word n, const HierarchyParams& params,
                          const StepHook& hook) {
  Hierarchy h;
  h.top = std::move(initial);
  h.subs = sim.empty_stream<SubClusterRow>();
  Word size = sim.count(h.top);
  h.sizes.push_back(size);
  const Word target = params.target(n);
  const Word cap = params.step_cap();
  while (size > target) {
    if (h.tau == cap)
      throw HierarchyExhausted("contraction did not reach " + std::to_string(target) + " clusters within " +
                               std::to_string(cap) + " steps");
    ++h.tau;
    StepResult r = contraction_step(sim, std::move(h.top), h.tau, params.seed);
    if (hook) hook(h.tau, r.steps);
    { Stream<StepRow> done = std::move(r.steps); }
    h.subs = sim.concat(std::move(h.subs), std::move(r.subs));
    h.top = std::move(r.next);
    size = r.next_size;
    h.sizes.push_back(size);
  }
  return h;
}

std::size_t Clustering::size(Word level) const {
  const auto& of = cluster_of[static_cast<std::size_t>(level)];
  std::size_t leaders = 0;
  for (std::size_t v = 0; v < of.size(); ++v)
    if (of[v] == static_cast<Word>(v)) ++leaders;
  return leaders;
}

Word Clustering::cluster_parent(const RootedTree& t, Word level, Word leader) const {
  if (leader == t.root) return kNone;
  return cluster_of[static_cast<std::size_t>(level)][static_cast<std::size_t>(t.parent[static_cast<std::size_t>(leader)])];
}

Clustering read_clustering(const RootedTree& t, const std::vector<SubClusterRow>& subs, Word tau) {
  const std::size_t n = t.parent.size();
  Clustering c;
  c.tau = tau;
  c.records = subs;
  c.cluster_of.assign(static_cast<std::size_t>(tau) + 1, std::vector<Word>(n));
  c.form_of.assign(static_cast<std::size_t>(tau) + 1, std::vector<Word>(n, 0));
  for (std::size_t v = 0; v < n; ++v) c.cluster_of[0][v] = static_cast<Word>(v);
  for (Word i = 1; i <= tau; ++i) {
    std::unordered_map<Word, Word> absorbed_by;
    std::unordered_map<Word, bool> formed;
    for (const SubClusterRow& r : subs) {
      if (r.level != i) continue;
      if (r.role == kJunior) absorbed_by[r.sub] = r.cluster;
      formed[r.cluster] = true;
    }
    const auto& prev = c.cluster_of[static_cast<std::size_t>(i - 1)];
    const auto& prev_form = c.form_of[static_cast<std::size_t>(i - 1)];
    auto& cur = c.cluster_of[static_cast<std::size_t>(i)];
    auto& cur_form = c.form_of[static_cast<std::size_t>(i)];
    for (std::size_t v = 0; v < n; ++v) {
      auto it = absorbed_by.find(prev[v]);
      cur[v] = it == absorbed_by.end() ? prev[v] : it->second;
      cur_form[v] = formed.count(cur[v]) != 0 ? i : prev_form[v];
    }
  }
  return c;
}

std::string clustering_json(const RootedTree& t, const Clustering& c) {
  nlohmann::json j;
  j["tau"] = c.tau;
  j["root"] = t.root;
  nlohmann::json levels = nlohmann::json::array();
  for (Word i = 0; i <= c.tau; ++i) {
    std::map<Word, std::vector<Word>> members;
    const auto& of = c.cluster_of[static_cast<std::size_t>(i)];
    for (std::size_t v = 0; v < of.size(); ++v) members[of[v]].push_back(static_cast<Word>(v));
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& [leader, vs] : members) {
      clusters.push_back({{"leader", leader},
                          {"form", c.form_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(leader)]},
                          {"parent", c.cluster_parent(t, i, leader)},
                          {"vertices", vs}});
    }
    levels.push_back({{"level", i}, {"clusters", clusters}});
  }
  j["levels"] = levels;
  nlohmann::json records = nlohmann::json::array();
  for (const SubClusterRow& r : c.records) {
    records.push_back({{"level", r.level},
                       {"cluster", r.cluster},
                       {"sub", r.sub},
                       {"sub_form", r.sub_form},
                       {"role", r.role == kSenior ? "senior" : "junior"}});
  }
  j["contractions"] = records;
  return j.dump(2);
}

}  // namespace mpcmst

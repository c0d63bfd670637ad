#include "mpcmst/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace mpcmst {

MpcConfig make_config(const RunConfig& rc, Word n, Word m) {
  MpcConfig c;
  c.n = n;
  c.m = m;
  c.delta = rc.delta;
  c.kappa = rc.kappa;
  c.c_g = rc.c_g;
  c.sort_round_cost = rc.sort_round_cost;
  c.rng_seed = rc.seed;
  return c;
}

namespace {

Word sum_of(const std::vector<Word>& v) { return std::accumulate(v.begin(), v.end(), Word{0}); }

std::vector<Component> components_of(const WeightedGraph& g, bool allow_forest) {
  if (allow_forest) return split_components(g);
  validate_and_root(g);
  Component c;
  c.graph = g;
  c.vertices.resize(static_cast<std::size_t>(g.n));
  std::iota(c.vertices.begin(), c.vertices.end(), Word{0});
  c.edge_ids.resize(g.edges.size());
  std::iota(c.edge_ids.begin(), c.edge_ids.end(), std::size_t{0});
  return {std::move(c)};
}

// Runs body(component, tree, sim, d_hat, seed) once per component on a fresh
// simulator, restarting with a derived seed when the hierarchy exhausts its
// step cap.
template <class Body>
RunInfo run_components(const std::vector<Component>& comps, const WeightedGraph& g, const RunConfig& rc, Body body) {
  RunInfo info;
  info.config = make_config(rc, g.n, static_cast<Word>(g.edges.size()));
  info.config.validate();
  info.components = static_cast<Word>(comps.size());
  bool first = true;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const Component& comp = comps[c];
    RootedTree t = validate_and_root(comp.graph);
    const std::uint64_t comp_seed = c == 0 ? rc.seed : mix_seed(rc.seed, 0x636f6d70ULL, c);
    Word d_hat = std::max<Word>(1, estimate_diameter(t, comp_seed).estimate);
    info.d_hat.push_back(d_hat);
    for (int attempt = 0;; ++attempt) {
      const std::uint64_t seed = attempt == 0 ? comp_seed : mix_seed(comp_seed, static_cast<std::uint64_t>(attempt));
      MpcConfig cfg = make_config(rc, comp.graph.n, static_cast<Word>(comp.graph.edges.size()));
      cfg.rng_seed = seed;
      Simulator sim(cfg);
      try {
        body(comp, t, sim, d_hat, seed);
      } catch (const HierarchyExhausted&) {
        if (attempt + 1 >= rc.max_attempts) throw;
        continue;
      }
      info.attempts = std::max(info.attempts, attempt + 1);
      info.stats = first ? sim.stats() : merge_parallel(info.stats, sim.stats());
      first = false;
      break;
    }
  }
  return info;
}

}  // namespace

VerifyReport run_verify(const WeightedGraph& g, const RunConfig& rc) {
  VerifyReport out;
  out.path_max.assign(g.edges.size(), kNegInf);
  std::vector<Component> comps;
  try {
    comps = components_of(g, rc.allow_forest);
  } catch (const NotSpanning& e) {
    out.yes = false;
    out.reason = e.what();
    out.info.config = make_config(rc, g.n, static_cast<Word>(g.edges.size()));
    out.info.attempts = 0;
    return out;
  }
  Word clusters = 0;
  out.info = run_components(comps, g, rc, [&](const Component& comp, const RootedTree& t, Simulator& sim, Word d_hat,
                                               std::uint64_t seed) {
    VerifyResult r = verify_tree(sim, comp.graph, t, VerifyParams{d_hat, rc.exponent, seed});
    clusters += sum_of(r.sizes);
    for (std::size_t i = 0; i < r.path_max.size(); ++i) out.path_max[comp.edge_ids[i]] = r.path_max[i];
    if (r.yes) return;
    std::size_t nt = comp.edge_ids[*r.witness_non_tree];
    if (!out.witness_non_tree || nt < *out.witness_non_tree) {
      out.yes = false;
      out.witness_non_tree = nt;
      out.witness_tree = comp.edge_ids[*r.witness_tree];
    }
  });
  out.info.cluster_total = clusters;
  return out;
}

SensitivityReport run_sensitivity(const WeightedGraph& g, const RunConfig& rc) {
  SensitivityReport out;
  out.sens.assign(g.edges.size(), kPosInf);
  out.mc.assign(g.edges.size(), kPosInf);
  auto comps = components_of(g, rc.allow_forest);
  Word clusters = 0;
  out.info = run_components(comps, g, rc, [&](const Component& comp, const RootedTree& t, Simulator& sim, Word d_hat,
                                              std::uint64_t seed) {
    SensitivityResult r = sensitivity_tree(sim, comp.graph, t, SensitivityParams{d_hat, rc.exponent, seed, nullptr});
    clusters += sum_of(r.sizes);
    for (std::size_t i = 0; i < r.sens.size(); ++i) {
      out.sens[comp.edge_ids[i]] = r.sens[i];
      out.mc[comp.edge_ids[i]] = r.mc[i];
    }
    out.is_mst = out.is_mst && r.is_mst;
    out.note_peak = std::max(out.note_peak, r.note_peak);
  });
  out.info.cluster_total = clusters;
  return out;
}

LcaReport run_lca(const WeightedGraph& g, const RunConfig& rc, bool dump_hierarchy) {
  LcaReport out;
  out.lca.assign(g.edges.size(), kNone);
  auto comps = components_of(g, rc.allow_forest);
  Word clusters = 0;
  out.info = run_components(comps, g, rc, [&](const Component& comp, const RootedTree& t, Simulator& sim, Word d_hat,
                                              std::uint64_t seed) {
    // Same seed derivation as the LCA stage inside verification and
    // sensitivity, so the dumped hierarchy is the one those runs use.
    LcaOutput r = all_edges_lca(sim, comp.graph, t, LcaParams{d_hat, rc.exponent, mix_seed(seed, 1)});
    clusters += sum_of(r.sizes);
    for (std::size_t i = 0; i < r.lca.size(); ++i)
      if (r.lca[i] != kNone) out.lca[comp.edge_ids[i]] = comp.vertices[static_cast<std::size_t>(r.lca[i])];
    if (dump_hierarchy) out.hierarchy_json.push_back(clustering_json(t, read_clustering(t, r.records, r.tau)));
  });
  out.info.cluster_total = clusters;
  return out;
}

std::string stats_json(const RunInfo& info) {
  nlohmann::ordered_json j;
  j["rounds_total"] = info.stats.rounds_total;
  j["rounds_by_phase"] = info.stats.rounds_by_phase;
  j["peak_global_by_phase"] = info.stats.peak_global_by_phase;
  j["peak_local_words"] = info.stats.peak_local_words;
  j["total_global_words"] = info.stats.total_global_words;
  j["messages_sent"] = info.stats.messages_sent;
  j["attempts"] = info.attempts;
  j["components"] = info.components;
  j["config"] = {{"n", info.config.n},
                 {"m", info.config.m},
                 {"delta", info.config.delta},
                 {"kappa", info.config.kappa},
                 {"c_g", info.config.c_g},
                 {"sort_round_cost", info.config.sort_round_cost},
                 {"local_cap", info.config.local_cap()}};
  return j.dump(2);
}

}  // namespace mpcmst

#include <chrono>
#include <map>

#include "doctest.h"
#include "mpcmst/oracle.hpp"
#include "mpcmst/verification.hpp"
#include "support.hpp"

using namespace mpcmst;
using namespace testsupport;

namespace {

// Max tree weight on the desc -> anc path over edges with both endpoints in
// the cluster `of[inside]`; kNegInf if none.
Word restricted_max(const RootedTree& t, const std::vector<Word>& of, Word desc, Word anc, Word inside) {
  Word best = kNegInf;
  for (Word x = desc; x != anc; x = t.parent[ix(x)]) {
    Word p = t.parent[ix(x)];
    if (of[ix(x)] == of[ix(inside)] && of[ix(p)] == of[ix(inside)]) best = std::max(best, t.weight[ix(x)]);
  }
  return best;
}

// Runs the labeled hierarchy and checks every out label after every step
// against its definition recomputed from T.
void check_labels_per_level(const WeightedGraph& g, std::uint64_t seed, double exponent) {
  auto t = validate_and_root(g);
  Simulator sim(config_for(g, seed));
  auto vertices = dfs_interval_labeling(sim, t);
  Word d_hat = std::max<Word>(1, estimate_diameter(t, seed).estimate);
  LcaStage lca = resolve_lcas(sim, g, vertices, LcaParams{d_hat, exponent, seed});
  auto split = split_edges(sim, lca.rows);
  auto halves = init_labels(sim, split);
  std::vector<Word> of(ix(g.n));
  for (Word v = 0; v < g.n; ++v) of[ix(v)] = v;
  auto check = [&] {
    for (const HalfRow& h : halves.records()) {
      REQUIRE(h.cd == of[ix(h.desc)]);
      REQUIRE(h.ca == of[ix(h.anc)]);
      CHECK(h.out_d == restricted_max(t, of, h.desc, h.anc, h.desc));
      CHECK(h.out_a == restricted_max(t, of, h.desc, h.anc, h.anc));
      if (h.out_d != kNegInf) CHECK(t.weight[ix(h.out_d_arg)] == h.out_d);
      if (h.out_a != kNegInf) CHECK(t.weight[ix(h.out_a_arg)] == h.out_a);
    }
  };
  check();
  auto h = build_hierarchy(sim, initial_clusters(sim, vertices), g.n, HierarchyParams{d_hat, exponent, seed + 7},
                           [&](Word, const Stream<StepRow>& steps) {
                             contract_labels(sim, halves, steps);
                             std::map<Word, Word> moved;
                             for (const StepRow& s : steps.records()) moved[s.leader] = s.new_leader;
                             for (Word& c : of) c = moved.at(c);
                             check();
                           });
  // Top-level through values and root paths against a sequential walk.
  auto levels = cluster_levels(sim, h.top);
  auto paths = collect_root_paths(sim, h.top, levels);
  std::map<Word, ClusterRow> top;
  for (const ClusterRow& c : h.top.records()) top[c.leader] = c;
  std::map<Word, Word> lev;
  for (const LevelRow& l : levels.records()) lev[l.cluster] = l.lev;
  std::size_t expected_entries = 0;
  for (const auto& [leader, c] : top) {
    Word depth = 0;
    for (Word x = leader; top.at(x).parent != kNone; x = top.at(x).parent) ++depth;
    CHECK(lev.at(leader) == depth);
    expected_entries += static_cast<std::size_t>(depth + 1);
  }
  CHECK(paths.size() == expected_entries);
  for (const PathRow& p : paths.records()) {
    Word x = p.cluster;
    Word up = kNegInf, thr = kNegInf, excl = kNegInf;
    for (Word j = 0; j < p.k; ++j) {
      const ClusterRow& c = top.at(x);
      up = std::max(up, c.w_up);
      if (j + 1 < p.k) excl = std::max(excl, c.thr_w);
      thr = std::max(thr, c.thr_w);
      x = c.parent;
    }
    CHECK(p.anc == x);
    CHECK(p.up_w == up);
    CHECK(p.thr_w == thr);
    CHECK(p.thr_excl_w == excl);
  }
}

VerifyResult run_verify(const WeightedGraph& g, std::uint64_t seed, double exponent = 3.0) {
  auto t = validate_and_root(g);
  Simulator sim(config_for(g, seed));
  Word d_hat = std::max<Word>(1, estimate_diameter(t, seed).estimate);
  return verify_tree(sim, g, t, VerifyParams{d_hat, exponent, seed});
}

void check_against_oracle(const WeightedGraph& g, std::uint64_t seed, double exponent = 3.0) {
  auto got = run_verify(g, seed, exponent);
  auto want = oracle::verify(g);
  auto pm = oracle::path_max(g);
  CHECK(got.yes == want.yes);
  CHECK(got.witness_non_tree == want.witness_non_tree);
  if (want.witness_tree && got.witness_tree) {
    CHECK(g.edges[*got.witness_tree].w == g.edges[*want.witness_tree].w);
    CHECK(g.edges[*got.witness_tree].is_tree);
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!g.edges[i].is_tree) CHECK(got.path_max[i] == pm[i]);
}

}  // namespace

TEST_CASE("hand examples") {
  // Tree a-b:1, b-c:2 with chord a-c:3.
  WeightedGraph tri = tree_from_parents({0, 0, 1}, {0, 1, 2});
  tri.edges.push_back(Edge{0, 2, 3, false});
  auto r = run_verify(tri, 1);
  CHECK(r.yes);
  CHECK(r.path_max[2] == 2);

  // Tree 1-2:5, 2-3:1, 2-4:7 (0-based 0-1, 1-2, 1-3) with chords {3,4}:4 and
  // {1,3}:2: the second chord covers the weight-5 edge.
  WeightedGraph g = tree_from_parents({0, 0, 1, 1}, {0, 5, 1, 7});
  g.edges.push_back(Edge{2, 3, 4, false});
  g.edges.push_back(Edge{0, 2, 2, false});
  r = run_verify(g, 1);
  CHECK_FALSE(r.yes);
  REQUIRE(r.witness_non_tree.has_value());
  CHECK(*r.witness_non_tree == 3);
  CHECK(*r.witness_tree == 2);  // the 2-4 edge of weight 7 covered by {3,4}:4
  check_against_oracle(g, 1);

  // No chords.
  r = run_verify(path_graph(20), 1);
  CHECK(r.yes);
  r = run_verify(path_graph(1), 1);
  CHECK(r.yes);
}

TEST_CASE("two-level contraction on a 4-path: innermost through") {
  // Path 0-1-2-3 with weights 5, 3, 7 and a chord over the whole path.
  WeightedGraph g = tree_from_parents({0, 0, 1, 2}, {0, 5, 3, 7});
  g.edges.push_back(Edge{0, 3, 9, false});
  for (std::uint64_t seed = 0; seed < 40; ++seed) check_labels_per_level(g, seed, 3.0);
  check_against_oracle(g, 0);
}

TEST_CASE("labels equal their definition after every step") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    Word n = std::uniform_int_distribution<Word>(2, 120)(rng);
    auto g = random_shape(rng, n, 20);
    add_random_chords(rng, g, 2 * n, 20);
    check_labels_per_level(g, static_cast<std::uint64_t>(trial), trial % 2 == 0 ? 3.0 : 0.5);
  }
  auto big = random_tree_with_diameter(500, 30, 4, 1000);
  std::mt19937_64 r2(4);
  add_random_chords(r2, big, 2000, 1000);
  check_labels_per_level(big, 4, 0.6);
}

TEST_CASE("path maxima and verdicts match the oracle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    Word n = std::uniform_int_distribution<Word>(2, 300)(rng);
    auto g = random_shape(rng, n, 8);
    add_random_chords(rng, g, std::uniform_int_distribution<Word>(0, 3 * n)(rng), 8);
    check_against_oracle(g, static_cast<std::uint64_t>(trial), trial % 3 == 0 ? 0.5 : 3.0);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto planted = random_graph_with_mst(400, 1600, 20, seed, 1000);
    CHECK(run_verify(planted, seed).yes);
    auto bad = perturbed_mst(400, 1600, 20, 1, seed, 1000);
    check_against_oracle(bad, seed);
    CHECK_FALSE(run_verify(bad, seed).yes);
  }
}

TEST_CASE("memory stays within the linear budget") {
  auto g = random_graph_with_mst(3000, 12000, 40, 3, 1 << 20);
  auto t = validate_and_root(g);
  Simulator sim(config_for(g, 3));
  verify_tree(sim, g, t, VerifyParams{estimate_diameter(t, 3).estimate, 3.0, 3});
  CHECK(sim.stats().total_global_words <= 8 * (g.n + static_cast<Word>(g.edges.size())));
  CHECK(sim.stats().peak_local_words <= sim.local_cap());
}

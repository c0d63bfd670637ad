#pragma once

#include <optional>
#include <vector>

#include "mpcmst/lca.hpp"

namespace mpcmst {

// One ancestor-descendant half of a non-tree edge with its two out labels.
// cd and ca are the leaders of the current clusters of desc and anc. The out
// values carry the child vertex of the tree edge attaining them.
struct HalfRow {
  Word origin;
  Word desc;
  Word anc;
  Word w;
  Word desc_low;
  Word cd;
  Word ca;
  Word out_d;  // max on the path restricted to edges inside c(desc)
  Word out_d_arg;
  Word out_a;  // same inside c(anc)
  Word out_a_arg;
};

// Singleton clusters: every out label starts at -inf.
Stream<HalfRow> init_labels(Simulator& sim, const Stream<AdEdgeRow>& halves);

// Recomputes the out labels after one contraction step; through values live
// on the cluster rows and are maintained by the step itself.
void contract_labels(Simulator& sim, Stream<HalfRow>& halves, const Stream<StepRow>& steps);

// Depth of every top-level cluster in the cluster tree.
struct LevelRow {
  Word cluster;
  Word lev;
};

Stream<LevelRow> cluster_levels(Simulator& sim, const Stream<ClusterRow>& top);

// Cluster c with its ancestor at distance k. With c = c_0, ..., c_k = anc:
// up is the max of w_up(c_j) over j < k, thr the max of through(c_j) over
// j < k, and thr_excl the same over j < k - 1.
struct PathRow {
  Word cluster;
  Word k;
  Word anc;
  Word up_w;
  Word up_arg;
  Word thr_w;
  Word thr_arg;
  Word thr_excl_w;
  Word thr_excl_arg;
};

// Every cluster's full path to the root by doubling, keeping all entries.
// Uses O(|C| * depth) words.
Stream<PathRow> collect_root_paths(Simulator& sim, const Stream<ClusterRow>& top, const Stream<LevelRow>& levels);

// Heaviest tree edge on the path of each half.
struct PathMaxRow {
  Word origin;
  Word desc;
  Word anc;
  Word w;
  Word pm;
  Word pm_arg;  // child vertex of the heaviest tree edge
};

Stream<PathMaxRow> evaluate_path_max(Simulator& sim, Stream<HalfRow> halves, const Stream<PathRow>& paths);

struct VerifyParams {
  Word d_hat = 0;
  double exponent = 3.0;
  std::uint64_t seed = 0;
};

struct VerifyResult {
  bool yes = true;
  std::optional<std::size_t> witness_non_tree;  // lowest violating edge index
  std::optional<std::size_t> witness_tree;      // heaviest tree edge it covers
  std::vector<Word> path_max;                   // per input edge; kNegInf for tree edges
  Word tau = 0;                                 // steps of the labeled hierarchy
  std::vector<Word> sizes;
};

// Runs LCA, edge splitting, labeled contraction, root path collection and
// evaluation on one connected instance. Throws HierarchyExhausted.
VerifyResult verify_tree(Simulator& sim, const WeightedGraph& g, const RootedTree& t, const VerifyParams& params);

}  // namespace mpcmst

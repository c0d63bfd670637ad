#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpcmst/graph.hpp"
#include "mpcmst/mpc/primitives.hpp"

namespace mpcmst {

// One tree vertex with its DFS interval.
struct VertexRow {
  Word v;
  Word parent;  // kNone at the root
  Word w_up;    // weight of {v, parent}; 0 at the root
  Word low;
  Word high;
};

// A cluster of the current level. Clusters are named by (leader, form):
// the leader vertex and the step that formed the cluster (0 for singletons).
// The interval is the leader's, which spans the whole cluster subtree.
struct ClusterRow {
  Word leader;
  Word form;
  Word parent;         // leader of the parent cluster; kNone at the root
  Word parent_vertex;  // p(leader), a vertex of the parent cluster
  Word pv_low;
  Word w_up;           // weight of {leader, p(leader)}
  Word thr_w;          // max tree weight from the parent's leader down to parent_vertex
  Word thr_arg;        // child vertex of the tree edge attaining thr_w
  Word low;
  Word high;
};

enum Role : Word { kKept = 0, kSenior = 1, kJunior = 2 };

// A pre-step cluster annotated with what the step did to it, plus a copy of
// its parent's fields so per-edge hooks need a single lookup.
struct StepRow {
  Word leader;
  Word form;
  Word role;
  Word new_leader;
  Word new_form;
  Word parent;
  Word parent_form;
  Word parent_low;
  Word parent_vertex;
  Word pv_low;
  Word w_up;
  Word thr_w;
  Word thr_arg;
  Word low;
  Word high;
};

// Provenance of one contraction: the sub-cluster `sub` became part of the
// cluster led by `cluster`, formed at step `level`.
struct SubClusterRow {
  Word cluster;
  Word level;
  Word sub;
  Word sub_form;
  Word role;  // kSenior or kJunior
  Word low;
  Word high;
  Word parent_vertex;  // p(sub); for a junior this lies in the senior
  Word pv_low;
  Word senior_form;  // formation step of the senior sub-cluster
};

struct HierarchyParams {
  Word d_hat = 0;
  double exponent = 3.0;
  std::uint64_t seed = 0;

  // Stop once at most this many clusters remain.
  Word target(Word n) const;
  Word step_cap() const;
};

class HierarchyExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool coin_heads(std::uint64_t seed, Word step, Word leader);

Stream<ClusterRow> initial_clusters(Simulator& sim, const Stream<VertexRow>& vertices);

struct StepResult {
  Stream<ClusterRow> next;
  Word next_size = 0;
  Stream<StepRow> steps;
  Stream<SubClusterRow> subs;
};

// One random-mating step: a cluster-tree edge (child, parent) contracts iff
// the child flips heads and the parent tails, so no cluster both absorbs and
// is absorbed.
StepResult contraction_step(Simulator& sim, Stream<ClusterRow> clusters, Word level, std::uint64_t seed);

using StepHook = std::function<void(Word level, const Stream<StepRow>& steps)>;

struct Hierarchy {
  Stream<ClusterRow> top;
  Stream<SubClusterRow> subs;  // every level, in level order
  Word tau = 0;
  std::vector<Word> sizes;  // |C_0|, ..., |C_tau|
};

// Contracts until params.target(n) clusters remain. hook runs after each step
// while its StepRows are resident. Throws HierarchyExhausted at the step cap;
// callers restart from scratch with a fresh seed.
Hierarchy build_hierarchy(Simulator& sim, Stream<ClusterRow> initial, Word n, const HierarchyParams& params,
                          const StepHook& hook = {});

// Sequential read-out of a hierarchy for tests and dumps.
struct Clustering {
  Word tau = 0;
  // cluster_of[i][v]: leader of the level-i cluster containing v.
  std::vector<std::vector<Word>> cluster_of;
  // form_of[i][v]: formation step of that cluster.
  std::vector<std::vector<Word>> form_of;
  std::vector<SubClusterRow> records;

  std::size_t size(Word level) const;
  // Parent leader of the level-i cluster led by `leader`; kNone at the root.
  Word cluster_parent(const RootedTree& t, Word level, Word leader) const;
};

Clustering read_clustering(const RootedTree& t, const std::vector<SubClusterRow>& subs, Word tau);

std::string clustering_json(const RootedTree& t, const Clustering& c);

}  // namespace mpcmst

#pragma once

#include <vector>

#include "mpcmst/clustering.hpp"

namespace mpcmst {

// Scatters the tree and labels every vertex with its DFS interval through an
// Euler tour ranked by pointer jumping. Runs under the "dfs_labeling" phase.
Stream<VertexRow> dfs_interval_labeling(Simulator& sim, const RootedTree& t);

// Hop table on the top-level cluster tree: target is the 2^j-th ancestor,
// saturating at the root.
struct HopRow {
  Word cluster;
  Word j;
  Word target;
  Word target_form;
  Word low;  // target's interval
  Word high;
};

Word hop_levels(Word d_hat);

Stream<HopRow> build_ancestor_table(Simulator& sim, const Stream<ClusterRow>& top, Word d_hat);

// One non-tree edge on its way through the LCA stages.
struct LcaRow {
  Word id;  // index of the edge in the input graph
  Word u;
  Word v;
  Word w;
  Word du;  // DFS numbers of the endpoints
  Word dv;
  Word cu;  // current cluster of u: leader and formation step
  Word cuf;
  Word cv;
  Word cvf;
  Word cul;  // top-level cluster intervals
  Word cuh;
  Word cvl;
  Word cvh;
  Word chi;  // candidate cluster during the hop sweep
  Word chil;
  Word chih;
  Word res;  // resolved cluster, then vertex
  Word res_form;
};

// Builds the rows of the non-tree edges with DFS numbers and singleton
// clusters.
Stream<LcaRow> lca_rows(Simulator& sim, const WeightedGraph& g, const Stream<VertexRow>& vertices);

// Moves every row's (cu, cuf) and (cv, cvf) to the post-step clusters.
void advance_lca_rows(Simulator& sim, Stream<LcaRow>& rows, const Stream<StepRow>& steps);

// Resolves res to the top-level cluster holding LCA(u, v).
Stream<LcaRow> find_lca_clusters(Simulator& sim, Stream<LcaRow> rows, const Stream<ClusterRow>& top,
                                 const Stream<HopRow>& hops, Word d_hat);

// Walks the contraction records from level tau down to 1; afterwards res is
// the LCA vertex.
Stream<LcaRow> undo_clustering(Simulator& sim, Stream<LcaRow> rows, const Stream<SubClusterRow>& subs, Word tau);

// A non-tree edge between a vertex and one of its proper ancestors.
struct AdEdgeRow {
  Word origin;
  Word desc;
  Word anc;
  Word w;
  Word desc_low;  // DFS number of desc
};

// Replaces each resolved edge by its halves toward the LCA, dropping empty
// halves. Provenance is kept; nothing is deduplicated.
Stream<AdEdgeRow> split_edges(Simulator& sim, const Stream<LcaRow>& resolved);

struct LcaParams {
  Word d_hat = 0;
  double exponent = 3.0;
  std::uint64_t seed = 0;
};

// Resolved rows of every non-tree edge plus the hierarchy records, kept
// resident for the stages that follow.
struct LcaStage {
  Stream<LcaRow> rows;
  Word tau = 0;
  std::vector<Word> sizes;
  Stream<SubClusterRow> subs;
};

// Runs the hierarchy, cluster search and undo on labeled vertices. Phases:
// lca_input, lca_hierarchy, lca_ancestor_table, lca_find_clusters, lca_undo.
LcaStage resolve_lcas(Simulator& sim, const WeightedGraph& g, const Stream<VertexRow>& vertices,
                      const LcaParams& params);

struct LcaOutput {
  std::vector<Word> lca;  // per input edge; kNone for tree edges
  Word tau = 0;
  std::vector<Word> sizes;
  std::vector<SubClusterRow> records;
};

// The full pipeline on one simulator. Throws HierarchyExhausted when the
// contraction runs past its step cap.
LcaOutput all_edges_lca(Simulator& sim, const WeightedGraph& g, const RootedTree& t, const LcaParams& params);

// Ancestor-descendant form of g: tree edges unchanged, then the halves of
// every non-tree edge in input order, each carrying the originating index.
WeightedGraph to_ancestor_descendant(const WeightedGraph& g, const std::vector<Word>& lca);

}  // namespace mpcmst

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpcmst/graph.hpp"

// Brute-force sequential reference implementations. They share no code with
// the simulator pipelines: rooting, path walks and union-find are their own.
namespace mpcmst::oracle {

struct MstResult {
  std::vector<std::size_t> edges;  // indices into g.edges, in insertion order
  Word weight = 0;                 // summed over every component
};

// Kruskal with ties broken by (w, min endpoint, max endpoint).
MstResult mst(const WeightedGraph& g);

// The tree-flagged edges, with `root` as the root of its component and every
// other component rooted at its smallest vertex.
class Forest {
 public:
  // Throws NotSpanning if the flags contain a cycle, or if allow_forest is
  // false and they do not connect every vertex.
  explicit Forest(const WeightedGraph& g, bool allow_forest = false, Word root = 0);

  Word parent(Word v) const { return parent_[static_cast<std::size_t>(v)]; }
  Word depth(Word v) const { return depth_[static_cast<std::size_t>(v)]; }
  Word component(Word v) const { return comp_[static_cast<std::size_t>(v)]; }
  // Index of the edge {v, parent(v)}; kNone at a root.
  Word parent_edge(Word v) const { return up_edge_[static_cast<std::size_t>(v)]; }

  // kNone when u and v lie in different components.
  Word lca(Word u, Word v) const;
  // Indices of the tree edges on the u-v path; empty across components.
  std::vector<std::size_t> path(Word u, Word v) const;

 private:
  std::vector<Word> parent_, depth_, comp_, up_edge_;
};

struct Verdict {
  bool yes = true;
  std::optional<std::size_t> witness_non_tree;  // lowest-index violating edge
  std::optional<std::size_t> witness_tree;      // a heaviest tree edge it covers
  std::string reason;
};

// YES iff the flags form a spanning tree (spanning forest with allow_forest)
// and no non-tree edge is strictly lighter than a tree edge on its path.
Verdict verify(const WeightedGraph& g, bool allow_forest = false);

// Per edge: the heaviest tree-edge weight on the path between its endpoints
// (kNegInf for tree edges and for edges across components).
std::vector<Word> path_max(const WeightedGraph& g, bool allow_forest = false);

// Per edge: the lightest non-tree edge covering it (kPosInf if none) for tree
// edges, kPosInf for non-tree edges.
std::vector<Word> min_cover(const WeightedGraph& g, bool allow_forest = false);

// Per edge: mc - w for tree edges and w - pathmax for non-tree edges; kPosInf
// stands for an uncovered tree edge.
std::vector<Word> sensitivity(const WeightedGraph& g, bool allow_forest = false);

// Per edge: LCA of the endpoints in the tree rooted at `root` (kNone for tree
// edges). Requires a spanning tree.
std::vector<Word> lca(const WeightedGraph& g, Word root = 0);

}  // namespace mpcmst::oracle

#pragma once

// Shared fixtures for the unit tests: small tree builders and sequential
// recomputations that stay independent of the simulator code paths.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "mpcmst/clustering.hpp"
#include "mpcmst/graph.hpp"
#include "mpcmst/mpc/config.hpp"

namespace testsupport {

using mpcmst::Edge;
using mpcmst::Word;
using mpcmst::WeightedGraph;

inline std::size_t ix(Word v) { return static_cast<std::size_t>(v); }

inline mpcmst::MpcConfig config_for(const WeightedGraph& g, std::uint64_t seed = 0) {
  mpcmst::MpcConfig c;
  c.n = g.n;
  c.m = static_cast<Word>(g.edges.size());
  c.rng_seed = seed;
  return c;
}

inline WeightedGraph tree_from_parents(const std::vector<Word>& parent, const std::vector<Word>& weight = {}) {
  WeightedGraph g;
  g.n = static_cast<Word>(parent.size());
  for (Word v = 1; v < g.n; ++v) {
    Word w = weight.empty() ? 1 : weight[ix(v)];
    g.edges.push_back(Edge{parent[ix(v)], v, w, true});
  }
  return g;
}

inline WeightedGraph path_graph(Word n) {
  std::vector<Word> p(ix(n));
  for (Word v = 1; v < n; ++v) p[ix(v)] = v - 1;
  return tree_from_parents(p);
}

inline WeightedGraph binary_tree(Word n) {
  std::vector<Word> p(ix(n));
  for (Word v = 1; v < n; ++v) p[ix(v)] = (v - 1) / 2;
  return tree_from_parents(p);
}

inline WeightedGraph star(Word leaves) {
  return tree_from_parents(std::vector<Word>(ix(leaves + 1), 0));
}

// Preorder DFS intervals visiting children in ascending id order.
struct Intervals {
  std::vector<Word> low, high;
};

inline Intervals sequential_intervals(const mpcmst::RootedTree& t) {
  auto ch = t.children();
  Intervals iv{std::vector<Word>(t.parent.size()), std::vector<Word>(t.parent.size())};
  Word clock = 0;
  std::vector<std::pair<Word, std::size_t>> stack{{t.root, 0}};
  iv.low[ix(t.root)] = clock++;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < ch[ix(v)].size()) {
      Word c = ch[ix(v)][i++];
      iv.low[ix(c)] = clock++;
      stack.push_back({c, 0});
    } else {
      iv.high[ix(v)] = clock - 1;
      stack.pop_back();
    }
  }
  return iv;
}

// Max tree weight on the path from `top` down to its descendant `bottom`;
// kNegInf when they coincide.
inline Word climb_max(const mpcmst::RootedTree& t, Word bottom, Word top) {
  Word best = mpcmst::kNegInf;
  for (Word x = bottom; x != top; x = t.parent[ix(x)]) best = std::max(best, t.weight[ix(x)]);
  return best;
}

// Random tree with a mixture of shapes: uniform attachment, long paths and
// brooms.
inline WeightedGraph random_shape(std::mt19937_64& rng, Word n, Word max_w) {
  std::vector<Word> p(ix(n)), w(ix(n), 0);
  int style = std::uniform_int_distribution<int>(0, 2)(rng);
  for (Word v = 1; v < n; ++v) {
    if (style == 0) {
      p[ix(v)] = std::uniform_int_distribution<Word>(0, v - 1)(rng);
    } else if (style == 1) {
      p[ix(v)] = std::uniform_int_distribution<Word>(std::max<Word>(0, v - 3), v - 1)(rng);
    } else {
      p[ix(v)] = v <= n / 2 ? v - 1 : std::uniform_int_distribution<Word>(0, n / 2)(rng);
    }
    w[ix(v)] = std::uniform_int_distribution<Word>(1, max_w)(rng);
  }
  // Relabel so the root is not always vertex 0.
  std::vector<Word> label(ix(n));
  for (Word v = 0; v < n; ++v) label[ix(v)] = v;
  std::shuffle(label.begin(), label.end(), rng);
  WeightedGraph g;
  g.n = n;
  for (Word v = 1; v < n; ++v) g.edges.push_back(Edge{label[ix(p[ix(v)])], label[ix(v)], w[ix(v)], true});
  return g;
}

// Adds up to `chords` distinct non-tree edges with weights in [1, max_w].
inline void add_random_chords(std::mt19937_64& rng, WeightedGraph& g, Word chords, Word max_w) {
  if (g.n < 3) return;
  std::set<std::pair<Word, Word>> used;
  for (const Edge& e : g.edges) used.insert(std::minmax(e.u, e.v));
  Word limit = g.n * (g.n - 1) / 2;
  for (Word i = 0; i < chords && static_cast<Word>(used.size()) < limit; ++i) {
    Word u, v;
    do {
      u = std::uniform_int_distribution<Word>(0, g.n - 1)(rng);
      v = std::uniform_int_distribution<Word>(0, g.n - 1)(rng);
    } while (u == v || used.count(std::minmax(u, v)) != 0);
    used.insert(std::minmax(u, v));
    g.edges.push_back(Edge{u, v, std::uniform_int_distribution<Word>(1, max_w)(rng), false});
  }
}

}  // namespace testsupport

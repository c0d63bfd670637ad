#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "mpcmst/graph.hpp"

namespace mpcmst {

InstanceKind parse_instance_kind(std::string_view name) {
  if (name == "random_tree" || name == "random_tree_with_diameter") return InstanceKind::random_tree;
  if (name == "planted" || name == "planted_mst" || name == "random_graph_with_mst") return InstanceKind::planted_mst;
  if (name == "perturbed" || name == "perturbed_mst") return InstanceKind::perturbed_mst;
  if (name == "lower_bound") return InstanceKind::lower_bound;
  throw std::invalid_argument("unknown instance kind '" + std::string(name) + "'");
}

const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::random_tree: return "random_tree";
    case InstanceKind::planted_mst: return "planted_mst";
    case InstanceKind::perturbed_mst: return "perturbed_mst";
    case InstanceKind::lower_bound: return "lower_bound";
  }
  return "unknown";
}

namespace {

using Rng = std::mt19937_64;

Word uniform(Rng& rng, Word lo, Word hi) { return std::uniform_int_distribution<Word>(lo, hi)(rng); }

// Parent array of a tree with diameter exactly `diameter`: a spine 0..D, and
// every other vertex hangs off spine vertex a at depth d <= min(a, D - a), so
// no path through the hanging parts can beat the spine.
std::vector<Word> tree_shape(Word n, Word diameter, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("empty instance: n must be positive");
  if (diameter >= n) throw std::invalid_argument("unsatisfiable parameters: diameter must be below n");
  if (diameter < 0) throw std::invalid_argument("diameter must be nonnegative");
  if (n > diameter + 1 && diameter < 2)
    throw std::invalid_argument("unsatisfiable parameters: diameter below 2 admits at most diameter+1 vertices");
  std::vector<Word> parent(static_cast<std::size_t>(n)), anchor(parent.size()), depth(parent.size(), 0);
  for (Word v = 0; v <= diameter; ++v) {
    parent[static_cast<std::size_t>(v)] = v == 0 ? 0 : v - 1;
    anchor[static_cast<std::size_t>(v)] = v;
  }
  for (Word v = diameter + 1; v < n; ++v) {
    Word x = uniform(rng, 0, v - 1);
    Word a = anchor[static_cast<std::size_t>(x)];
    if (depth[static_cast<std::size_t>(x)] + 1 > std::min(a, diameter - a)) {
      x = uniform(rng, 1, diameter - 1);
      a = x;
    }
    parent[static_cast<std::size_t>(v)] = x;
    anchor[static_cast<std::size_t>(v)] = a;
    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(x)] + 1;
  }
  return parent;
}

struct PlantedTree {
  WeightedGraph g;
  std::vector<Word> parent, weight, depth;
};

PlantedTree planted_tree(Word n, Word diameter, Word max_weight, Rng& rng) {
  if (max_weight < 2) throw std::invalid_argument("max weight must be at least 2");
  std::vector<Word> shape = tree_shape(n, diameter, rng);
  std::vector<Word> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), Word{0});
  std::shuffle(label.begin(), label.end(), rng);
  PlantedTree t;
  t.g.n = n;
  t.parent.assign(static_cast<std::size_t>(n), 0);
  t.weight.assign(static_cast<std::size_t>(n), 0);
  t.depth.assign(static_cast<std::size_t>(n), 0);
  const Word half = max_weight / 2;
  for (Word v = 0; v < n; ++v) {
    Word lv = label[static_cast<std::size_t>(v)];
    Word lp = label[static_cast<std::size_t>(shape[static_cast<std::size_t>(v)])];
    t.parent[static_cast<std::size_t>(lv)] = lp;
    // Spine vertices precede their hanging descendants, so depths fill in order.
    if (v != 0) {
      Word w = uniform(rng, 1, half);
      t.weight[static_cast<std::size_t>(lv)] = w;
      t.depth[static_cast<std::size_t>(lv)] = t.depth[static_cast<std::size_t>(lp)] + 1;
      t.g.edges.push_back(Edge{lp, lv, w, true});
    }
  }
  return t;
}

Word path_max(const PlantedTree& t, Word u, Word v) {
  Word best = 0;
  while (u != v) {
    if (t.depth[static_cast<std::size_t>(u)] < t.depth[static_cast<std::size_t>(v)]) std::swap(u, v);
    best = std::max(best, t.weight[static_cast<std::size_t>(u)]);
    u = t.parent[static_cast<std::size_t>(u)];
  }
  return best;
}

void add_chords(PlantedTree& t, Word m, Rng& rng) {
  const Word n = t.g.n;
  const Word chords = m - (n - 1);
  if (chords < 0) throw std::invalid_argument("edge count must be at least n-1");
  if (chords > n * (n - 1) / 2 - (n - 1)) throw std::invalid_argument("edge count exceeds the complete graph");
  std::set<std::pair<Word, Word>> used;
  for (const Edge& e : t.g.edges) used.insert(std::minmax(e.u, e.v));
  for (Word i = 0; i < chords; ++i) {
    Word u = 0, v = 0;
    do {
      u = uniform(rng, 0, n - 1);
      v = uniform(rng, 0, n - 1);
    } while (u == v || used.count(std::minmax(u, v)) != 0);
    used.insert(std::minmax(u, v));
    t.g.edges.push_back(Edge{u, v, 0, false});
  }
}

void weigh_chords(PlantedTree& t, Word max_weight, Rng& rng) {
  const Word half = max_weight / 2;
  for (Edge& e : t.g.edges)
    if (!e.is_tree) e.w = path_max(t, e.u, e.v) + uniform(rng, 1, half);
}

}  // namespace

WeightedGraph random_tree_with_diameter(Word n, Word diameter, std::uint64_t seed, Word max_weight) {
  Rng rng(seed);
  return planted_tree(n, diameter, max_weight, rng).g;
}

WeightedGraph random_graph_with_mst(Word n, Word m, Word diameter, std::uint64_t seed, Word max_weight) {
  Rng rng(seed);
  PlantedTree t = planted_tree(n, diameter, max_weight, rng);
  add_chords(t, m, rng);
  weigh_chords(t, max_weight, rng);
  return t.g;
}

WeightedGraph perturbed_mst(Word n, Word m, Word diameter, Word k, std::uint64_t seed, Word max_weight) {
  if (k < 1) throw std::invalid_argument("perturbed instances need at least one violation");
  if (k > m - (n - 1)) throw std::invalid_argument("more violations requested than non-tree edges");
  Rng rng(seed);
  PlantedTree t = planted_tree(n, diameter, max_weight, rng);
  add_chords(t, m, rng);
  weigh_chords(t, max_weight, rng);
  std::vector<std::size_t> chord_ids;
  for (std::size_t i = 0; i < t.g.edges.size(); ++i)
    if (!t.g.edges[i].is_tree) chord_ids.push_back(i);
  std::shuffle(chord_ids.begin(), chord_ids.end(), rng);
  for (Word j = 0; j < k; ++j) {
    Edge& e = t.g.edges[chord_ids[static_cast<std::size_t>(j)]];
    Word pm = path_max(t, e.u, e.v);
    if (pm >= 2) {
      e.w = uniform(rng, 1, pm - 1);
      continue;
    }
    // Every tree edge on the path weighs 1, so raise the deeper endpoint's parent edge instead.
    Word x = t.depth[static_cast<std::size_t>(e.u)] >= t.depth[static_cast<std::size_t>(e.v)] ? e.u : e.v;
    Word raised = uniform(rng, 2, max_weight);
    t.weight[static_cast<std::size_t>(x)] = raised;
    for (Edge& te : t.g.edges)
      if (te.is_tree && ((te.u == x && te.v == t.parent[static_cast<std::size_t>(x)]) ||
                         (te.v == x && te.u == t.parent[static_cast<std::size_t>(x)])))
        te.w = raised;
    e.w = 1;
  }
  return t.g;
}

WeightedGraph lower_bound_instance(Word n, Word cycles) {
  if (cycles == 1) {
    if (n < 3) throw std::invalid_argument("a cycle needs at least 3 vertices");
  } else if (cycles == 2) {
    if (n < 6 || n % 2 != 0) throw std::invalid_argument("two cycles need an even n of at least 6");
  } else {
    throw std::invalid_argument("cycles must be 1 or 2");
  }
  WeightedGraph g;
  g.n = n + 1;
  const Word apex = n;
  const Word len = n / cycles;
  for (Word c = 0; c < cycles; ++c) {
    const Word first = c * len;
    for (Word i = 0; i < len; ++i) {
      Word u = first + i;
      Word v = first + (i + 1) % len;
      // The closing edge of each cycle stays out of the tree.
      g.edges.push_back(Edge{u, v, 1, i + 1 < len});
    }
  }
  for (Word v = 0; v < n; ++v) g.edges.push_back(Edge{apex, v, 2, v % len == 0});
  return g;
}

WeightedGraph generate_instance(InstanceKind kind, const GeneratorParams& p, std::uint64_t seed) {
  switch (kind) {
    case InstanceKind::random_tree: return random_tree_with_diameter(p.n, p.diameter, seed, p.max_weight);
    case InstanceKind::planted_mst: return random_graph_with_mst(p.n, p.m, p.diameter, seed, p.max_weight);
    case InstanceKind::perturbed_mst: return perturbed_mst(p.n, p.m, p.diameter, p.perturb, seed, p.max_weight);
    case InstanceKind::lower_bound: return lower_bound_instance(p.n, p.cycles);
  }
  throw std::invalid_argument("unknown instance kind");
}

}  // namespace mpcmst

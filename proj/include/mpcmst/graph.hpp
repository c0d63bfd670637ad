#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpcmst/mpc/types.hpp"

namespace mpcmst {

struct Edge {
  Word u = 0;
  Word v = 0;
  Word w = 1;
  bool is_tree = false;
  // Index of the input edge this one was derived from; kNone for input edges.
  Word origin = kNone;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct WeightedGraph {
  Word n = 0;
  std::vector<Edge> edges;

  Word max_weight() const;
  std::size_t tree_edge_count() const;
};

struct RootedTree {
  Word root = 0;
  std::vector<Word> parent;  // parent[root] == root
  std::vector<Word> weight;  // weight of {v, parent(v)}; 0 at the root
  std::vector<Word> parent_edge;  // index into the graph's edge list; kNone at the root

  Word size() const { return static_cast<Word>(parent.size()); }
  std::vector<Word> depths() const;
  std::vector<std::vector<Word>> children() const;
};

struct DiameterEstimate {
  Word exact = 0;
  Word estimate = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The tree flags do not describe a spanning tree (or spanning forest).
class NotSpanning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WeightedGraph parse_edge_list(std::string_view text);
std::string format_edge_list(const WeightedGraph& g);

RootedTree validate_and_root(const WeightedGraph& g, Word root = 0);

// exact_D by double BFS; the estimate is drawn uniformly from [D, 2D].
DiameterEstimate estimate_diameter(const RootedTree& t, std::uint64_t seed);

struct Component {
  WeightedGraph graph;
  std::vector<Word> vertices;         // local id -> id in the input graph
  std::vector<std::size_t> edge_ids;  // local edge -> index in the input graph
};

// Splits by the components of the tree-flagged forest. Throws NotSpanning if
// the flags contain a cycle or a non-tree edge joins two forest components.
std::vector<Component> split_components(const WeightedGraph& g);

enum class InstanceKind { random_tree, planted_mst, perturbed_mst, lower_bound };

InstanceKind parse_instance_kind(std::string_view name);
const char* to_string(InstanceKind k);

struct GeneratorParams {
  Word n = 0;
  Word m = 0;          // total edge count, tree edges included
  Word diameter = 0;   // target tree diameter
  Word perturb = 1;    // flagged edges made non-minimal
  Word cycles = 1;     // lower-bound construction: 1 or 2
  Word max_weight = Word{1} << 20;
};

WeightedGraph generate_instance(InstanceKind kind, const GeneratorParams& p, std::uint64_t seed);

WeightedGraph random_tree_with_diameter(Word n, Word diameter, std::uint64_t seed, Word max_weight = Word{1} << 20);
WeightedGraph random_graph_with_mst(Word n, Word m, Word diameter, std::uint64_t seed, Word max_weight = Word{1} << 20);
WeightedGraph perturbed_mst(Word n, Word m, Word diameter, Word k, std::uint64_t seed, Word max_weight = Word{1} << 20);
// n cycle vertices plus an apex joined to all of them: cycle edges weigh 1,
// apex edges 2. The flagged tree is a minimum spanning tree.
WeightedGraph lower_bound_instance(Word n, Word cycles);

}  // namespace mpcmst

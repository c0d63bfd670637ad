#include "mpcmst/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace mpcmst {

Word WeightedGraph::max_weight() const {
  Word w = 0;
  for (const Edge& e : edges) w = std::max(w, e.w);
  return w;
}

std::size_t WeightedGraph::tree_edge_count() const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.is_tree; }));
}

std::vector<Word> RootedTree::depths() const {
  const std::size_t n = parent.size();
  std::vector<Word> depth(n, kNone);
  if (n == 0) return depth;
  depth[static_cast<std::size_t>(root)] = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<Word> chain;
    Word x = static_cast<Word>(v);
    while (depth[static_cast<std::size_t>(x)] == kNone) {
      chain.push_back(x);
      x = parent[static_cast<std::size_t>(x)];
    }
    Word d = depth[static_cast<std::size_t>(x)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[static_cast<std::size_t>(*it)] = ++d;
  }
  return depth;
}

std::vector<std::vector<Word>> RootedTree::children() const {
  std::vector<std::vector<Word>> ch(parent.size());
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (static_cast<Word>(v) != root) ch[static_cast<std::size_t>(parent[v])].push_back(static_cast<Word>(v));
  return ch;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Word to_word(std::string_view tok, std::size_t line, const char* what) {
  Word x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  return x;
}

}  // namespace

WeightedGraph parse_edge_list(std::string_view text) {
  WeightedGraph g;
  bool have_n = false;
  std::set<std::pair<Word, Word>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_n) {
      if (tok.size() != 1) throw ParseError(line_no, "expected the vertex count on its own line");
      g.n = to_word(tok[0], line_no, "vertex count");
      if (g.n <= 0) throw ParseError(line_no, "vertex count must be positive");
      have_n = true;
      continue;
    }
    if (tok.size() != 4) throw ParseError(line_no, "expected 'u v w flag'");
    Edge e;
    e.u = to_word(tok[0], line_no, "vertex id");
    e.v = to_word(tok[1], line_no, "vertex id");
    e.w = to_word(tok[2], line_no, "weight");
    if (tok[3] == "T") {
      e.is_tree = true;
    } else if (tok[3] == "N") {
      e.is_tree = false;
    } else {
      throw ParseError(line_no, "flag must be T or N");
    }
    if (e.u < 0 || e.u >= g.n || e.v < 0 || e.v >= g.n) throw ParseError(line_no, "vertex id out of range");
    if (e.u == e.v) throw ParseError(line_no, "self-loop");
    if (e.w <= 0) throw ParseError(line_no, "nonpositive weight");
    if (!seen.insert(std::minmax(e.u, e.v)).second) throw ParseError(line_no, "duplicate edge");
    g.edges.push_back(e);
    if (end == text.size()) break;
  }
  if (!have_n) throw ParseError(line_no, "missing vertex count");
  return g;
}

std::string format_edge_list(const WeightedGraph& g) {
  std::ostringstream os;
  os << g.n << '\n';
  for (const Edge& e : g.edges) os << e.u << ' ' << e.v << ' ' << e.w << ' ' << (e.is_tree ? 'T' : 'N') << '\n';
  return os.str();
}

RootedTree validate_and_root(const WeightedGraph& g, Word root) {
  if (root < 0 || root >= g.n) throw std::invalid_argument("root outside the vertex range");
  const auto n = static_cast<std::size_t>(g.n);
  std::size_t tree_edges = g.tree_edge_count();
  if (tree_edges != n - 1)
    throw NotSpanning("not a spanning tree: " + std::to_string(tree_edges) + " tree edges for " +
                      std::to_string(n) + " vertices");
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (!e.is_tree) continue;
    adj[static_cast<std::size_t>(e.u)].push_back(i);
    adj[static_cast<std::size_t>(e.v)].push_back(i);
  }
  RootedTree t;
  t.root = root;
  t.parent.assign(n, kNone);
  t.weight.assign(n, 0);
  t.parent_edge.assign(n, kNone);
  t.parent[static_cast<std::size_t>(root)] = root;
  std::queue<Word> q;
  q.push(root);
  std::size_t reached = 1;
  while (!q.empty()) {
    Word x = q.front();
    q.pop();
    for (std::size_t i : adj[static_cast<std::size_t>(x)]) {
      const Edge& e = g.edges[i];
      Word y = e.u == x ? e.v : e.u;
      if (t.parent[static_cast<std::size_t>(y)] != kNone) continue;
      t.parent[static_cast<std::size_t>(y)] = x;
      t.weight[static_cast<std::size_t>(y)] = e.w;
      t.parent_edge[static_cast<std::size_t>(y)] = static_cast<Word>(i);
      ++reached;
      q.push(y);
    }
  }
  if (reached != n) throw NotSpanning("not a spanning tree: tree edges are disconnected");
  return t;
}

namespace {

std::pair<Word, Word> farthest(const std::vector<std::vector<Word>>& adj, Word src) {
  std::vector<Word> dist(adj.size(), kNone);
  std::queue<Word> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  Word best = src;
  while (!q.empty()) {
    Word x = q.front();
    q.pop();
    if (dist[static_cast<std::size_t>(x)] > dist[static_cast<std::size_t>(best)]) best = x;
    for (Word y : adj[static_cast<std::size_t>(x)]) {
      if (dist[static_cast<std::size_t>(y)] != kNone) continue;
      dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
      q.push(y);
    }
  }
  return {best, dist[static_cast<std::size_t>(best)]};
}

}  // namespace

DiameterEstimate estimate_diameter(const RootedTree& t, std::uint64_t seed) {
  DiameterEstimate d;
  if (t.size() <= 1) return d;
  std::vector<std::vector<Word>> adj(t.parent.size());
  for (std::size_t v = 0; v < t.parent.size(); ++v) {
    if (static_cast<Word>(v) == t.root) continue;
    adj[v].push_back(t.parent[v]);
    adj[static_cast<std::size_t>(t.parent[v])].push_back(static_cast<Word>(v));
  }
  auto [a, da] = farthest(adj, t.root);
  auto [b, db] = farthest(adj, a);
  (void)da;
  (void)b;
  d.exact = db;
  std::mt19937_64 rng(seed);
  d.estimate = std::uniform_int_distribution<Word>(d.exact, 2 * d.exact)(rng);
  return d;
}

namespace {

struct UnionFind {
  std::vector<Word> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), Word{0}); }
  Word find(Word x) {
    while (p[static_cast<std::size_t>(x)] != x) {
      p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
      x = p[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(Word a, Word b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    p[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

}  // namespace

std::vector<Component> split_components(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  UnionFind uf(n);
  for (const Edge& e : g.edges)
    if (e.is_tree && !uf.unite(e.u, e.v)) throw NotSpanning("not a spanning forest: tree edges contain a cycle");
  for (const Edge& e : g.edges)
    if (!e.is_tree && uf.find(e.u) != uf.find(e.v))
      throw NotSpanning("not a spanning forest: a non-tree edge joins two forest components");
  std::vector<Word> comp_of(n, kNone), local(n, kNone);
  std::vector<Component> out;
  for (std::size_t v = 0; v < n; ++v) {
    Word r = uf.find(static_cast<Word>(v));
    if (comp_of[static_cast<std::size_t>(r)] == kNone) {
      comp_of[static_cast<std::size_t>(r)] = static_cast<Word>(out.size());
      out.emplace_back();
    }
    Component& c = out[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(r)])];
    local[v] = static_cast<Word>(c.vertices.size());
    c.vertices.push_back(static_cast<Word>(v));
  }
  for (Component& c : out) c.graph.n = static_cast<Word>(c.vertices.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    Component& c = out[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(uf.find(e.u))])];
    Edge le = e;
    le.u = local[static_cast<std::size_t>(e.u)];
    le.v = local[static_cast<std::size_t>(e.v)];
    c.graph.edges.push_back(le);
    c.edge_ids.push_back(i);
  }
  return out;
}

}  // namespace mpcmst

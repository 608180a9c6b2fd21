#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftcl/errors.hpp"
#include "ftcl/rng.hpp"

namespace ftcl {

using Vertex = int;

/// Sorted set of distinct vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> vs) : v_(vs) { normalize(); }
  explicit VertexSet(std::vector<Vertex> vs) : v_(std::move(vs)) { normalize(); }

  bool contains(Vertex x) const { return std::binary_search(v_.begin(), v_.end(), x); }
  void insert(Vertex x) {
    auto it = std::lower_bound(v_.begin(), v_.end(), x);
    if (it == v_.end() || *it != x) v_.insert(it, x);
  }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<Vertex>& items() const { return v_; }
  bool operator==(const VertexSet&) const = default;

 private:
  void normalize() {
    std::sort(v_.begin(), v_.end());
    v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
  }
  std::vector<Vertex> v_;
};

struct Edge {
  Vertex u, v;  // normalized u < v
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Immutable undirected simple graph on vertices 0..n-1.
class Graph {
 public:
  explicit Graph(int n = 0) : n_(n), adj_(n) {}

  static Graph from_edges(int n, const std::vector<std::pair<Vertex, Vertex>>& es) {
    Graph g(n);
    for (auto [a, b] : es) g.add_edge(a, b);
    g.finish();
    return g;
  }

  void add_edge(Vertex a, Vertex b) {
    if (a < 0 || a >= n_ || b < 0 || b >= n_) throw ParseError("vertex id out of range");
    if (a == b) throw ParseError("self-loop");
    Edge e = make_edge(a, b);
    if (has_edge(e.u, e.v)) throw ParseError("duplicate edge");
    edges_.push_back(e);
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }

  void finish() {
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    std::sort(edges_.begin(), edges_.end());
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }

  bool has_edge(Vertex a, Vertex b) const {
    if (adj_[a].size() > adj_[b].size()) std::swap(a, b);
    return std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
  }

 private:
  int n_;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<Edge> edges_;
};

/// Parses "n m" followed by m lines "u v". Rejects self-loops, duplicates and
/// out-of-range ids, reporting the offending line number.
inline Graph load_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + what);
  };

  if (!next_line()) throw ParseError("empty input");
  std::istringstream hdr(line);
  long long n = -1, m = -1;
  if (!(hdr >> n >> m) || n < 0 || m < 0) throw fail("expected header \"n m\"");

  Graph g(static_cast<int>(n));
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError("unexpected end of input: expected " + std::to_string(m) + " edges");
    std::istringstream es(line);
    long long a, b;
    if (!(es >> a >> b)) throw fail("expected edge \"u v\"");
    if (a < 0 || a >= n || b < 0 || b >= n) throw fail("vertex id out of range");
    if (a == b) throw fail("self-loop");
    try {
      g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
  }
  g.finish();
  return g;
}

/// G(n,p): each pair kept independently with probability p.
inline Graph generate_gnp(int n, double p, uint64_t seed) {
  if (n < 1) throw InvalidQuery("gnp: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw InvalidQuery("gnp: p must lie in [0,1]");
  Rng rng(mix64(seed ^ 0x676e70ull));
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.coin(p)) g.add_edge(u, v);
  g.finish();
  return g;
}

/// w x h grid; vertex (r,c) has id r*w + c.
inline Graph generate_grid(int w, int h) {
  if (w < 1 || h < 1) throw InvalidQuery("grid: dimensions must be >= 1");
  Graph g(w * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) g.add_edge(r * w + c, r * w + c + 1);
      if (r + 1 < h) g.add_edge(r * w + c, (r + 1) * w + c);
    }
  g.finish();
  return g;
}

/// Star K_{1,k}: center is vertex 0, leaves 1..k.
inline Graph generate_star(int k) {
  if (k < 1) throw InvalidQuery("star: k must be >= 1");
  Graph g(k + 1);
  for (int i = 1; i <= k; ++i) g.add_edge(0, i);
  g.finish();
  return g;
}

/// Cycle C_k (k >= 3); k in {1,2} degenerates to a single vertex / one edge.
inline Graph generate_cycle(int k) {
  if (k < 1) throw InvalidQuery("cycle: k must be >= 1");
  Graph g(k);
  for (int i = 0; i + 1 < k; ++i) g.add_edge(i, i + 1);
  if (k >= 3) g.add_edge(k - 1, 0);
  g.finish();
  return g;
}

/// Exhaustive-traversal ground truth: is there an s-t path avoiding `faults`?
inline bool oracle_connected(const Graph& g, Vertex s, Vertex t, const VertexSet& faults) {
  if (faults.contains(s) || faults.contains(t)) throw InvalidQuery("query endpoint is a failed vertex");
  if (s == t) return true;
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(u)) {
      if (seen[w] || faults.contains(w)) continue;
      if (w == t) return true;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

/// Component id per vertex (ids are 0-based in order of smallest member).
inline std::vector<int> connected_components(const Graph& g) {
  std::vector<int> comp(g.n(), -1);
  int c = 0;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = c;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(u))
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
    ++c;
  }
  return comp;
}

struct UnionFind {
  std::vector<int> par;
  explicit UnionFind(int n) : par(n) { std::iota(par.begin(), par.end(), 0); }
  int find(int x) {
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller id as representative
    par[b] = a;
    return true;
  }
};

/// An edge with an integer weight and a type tag, as used by the sparsifier.
struct WeightedEdge {
  Vertex u, v;
  long long weight = 0;
  int type = 0;  // participates in tie-breaking only
};

/// Kruskal with full deterministic tie-breaking:
/// (weight, min endpoint, max endpoint, type). Returns indices into `edges`.
inline std::vector<size_t> min_spanning_forest(int n, const std::vector<WeightedEdge>& edges) {
  std::vector<size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](size_t i) {
    const auto& e = edges[i];
    return std::tuple(e.weight, std::min(e.u, e.v), std::max(e.u, e.v), e.type);
  };
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return key(a) < key(b); });
  UnionFind uf(n);
  std::vector<size_t> picked;
  for (size_t i : order)
    if (uf.unite(edges[i].u, edges[i].v)) picked.push_back(i);
  std::sort(picked.begin(), picked.end());
  return picked;
}

inline double log2n(int n) { return n <= 1 ? 1.0 : std::log2(static_cast<double>(n)); }

}  // namespace ftcl

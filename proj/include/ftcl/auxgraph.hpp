#pragma once

// Typed auxiliary multigraph over a coarse hierarchy: the original edges plus
// a clique on every component boundary N(H_K), typed by K.  Provides the
// reference (non-label) machinery for a query <s,t,F>: affected components,
// valid edges, the query graph G*, per-vertex edge classification, cut-set
// formulas, and the randomized sparsify-and-orient pass that bounds per-vertex
// out-degree while preserving connectivity answers with high probability.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "ftcl/coarsen.hpp"
#include "ftcl/errors.hpp"
#include "ftcl/graph.hpp"
#include "ftcl/rng.hpp"

namespace ftcl {

/// Type tag for original (input graph) edges; all other types are coarse
/// component ids.
inline constexpr int kOriginal = -1;

/// Edge identity is the triple (u, v, type): parallel edges of different
/// types are distinct objects.  Before orientation u < v; after orientation
/// the edge is stored tail -> head.
struct TypedEdge {
  Vertex u = -1;  // tail once oriented
  Vertex v = -1;  // head once oriented
  int type = kOriginal;

  friend auto operator<=>(const TypedEdge&, const TypedEdge&) = default;
};

/// Canonical (undirected) identity of a typed edge.
inline std::tuple<Vertex, Vertex, int> edge_key(const TypedEdge& e) {
  return {std::min(e.u, e.v), std::max(e.u, e.v), e.type};
}

struct AuxGraph {
  int n = 0;
  std::vector<TypedEdge> edges;
  bool oriented = false;
  std::vector<std::vector<int>> out;  // edge indices with tail v, once oriented
  std::vector<int> depth;             // d(v) = depth of K_v (-1 outside region)
  int max_outdeg = 0;

  /// d(e) = max depth of the two endpoint components.
  long long edge_depth(int ei) const {
    const TypedEdge& e = edges[static_cast<std::size_t>(ei)];
    return std::max(depth[static_cast<std::size_t>(e.u)],
                    depth[static_cast<std::size_t>(e.v)]);
  }
};

/// The unsparsified auxiliary graph: original edges plus, for every component
/// K, a clique on N(H_K) whose edges carry type K.
inline AuxGraph build_aux_graph(const Graph& g, const CoarseHierarchy& h) {
  AuxGraph a;
  a.n = g.n();
  a.depth.assign(static_cast<std::size_t>(g.n()), -1);
  for (Vertex v = 0; v < g.n(); ++v)
    if (h.comp_of[static_cast<std::size_t>(v)] != -1)
      a.depth[static_cast<std::size_t>(v)] =
          h.comps[static_cast<std::size_t>(h.comp_of[static_cast<std::size_t>(v)])].depth;
  for (const Edge& e : g.edges()) a.edges.push_back({e.u, e.v, kOriginal});
  for (std::size_t k = 0; k < h.comps.size(); ++k) {
    const auto& nb = h.comps[k].nbrs;  // sorted
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        a.edges.push_back({nb[i], nb[j], static_cast<int>(k)});
  }
  return a;
}

/// Per-query state: which components are affected, i.e. have a query vertex
/// or fault inside V(H_K).  Affectedness is upward-closed in the hierarchy.
struct QueryContext {
  Vertex s = -1, t = -1;
  VertexSet faults;
  std::vector<char> affected;  // indexed by coarse component id

  bool edge_valid(const CoarseHierarchy& h, const TypedEdge& e) const {
    if (e.type != kOriginal && affected[static_cast<std::size_t>(e.type)])
      return false;  // (C1)
    int ku = h.comp_of[static_cast<std::size_t>(e.u)];
    int kv = h.comp_of[static_cast<std::size_t>(e.v)];
    return ku != -1 && kv != -1 && affected[static_cast<std::size_t>(ku)] &&
           affected[static_cast<std::size_t>(kv)];  // (C2)
  }
};

inline QueryContext make_query_context(const CoarseHierarchy& h, Vertex s, Vertex t,
                                       const VertexSet& faults) {
  QueryContext ctx;
  ctx.s = s;
  ctx.t = t;
  ctx.faults = faults;
  ctx.affected.assign(h.comps.size(), 0);
  auto mark_up = [&](Vertex x) {
    if (x < 0 || x >= static_cast<Vertex>(h.comp_of.size())) throw InvalidQuery("query vertex out of range");
    int k = h.comp_of[static_cast<std::size_t>(x)];
    for (; k != -1; k = h.comps[static_cast<std::size_t>(k)].parent) {
      if (ctx.affected[static_cast<std::size_t>(k)]) break;
      ctx.affected[static_cast<std::size_t>(k)] = 1;
    }
  };
  mark_up(s);
  mark_up(t);
  for (Vertex x : faults.items()) mark_up(x);
  return ctx;
}

/// Per-vertex edge classification (indices into aux.edges), computed directly
/// from the definitions.
struct EdgeClasses {
  std::vector<int> up;    // other endpoint in an ancestor component of K_v
  std::vector<int> down;  // other endpoint in an affected strict descendant
  std::vector<int> bad;   // type is an affected component
  std::vector<int> star;  // valid edges incident to v (E*(v))
};

inline EdgeClasses classify_edges(const AuxGraph& aux, const CoarseHierarchy& h,
                                  const QueryContext& ctx, Vertex v) {
  EdgeClasses out;
  int kv = h.comp_of[static_cast<std::size_t>(v)];
  if (kv == -1) throw InvalidQuery("vertex outside the hierarchy region");
  for (std::size_t i = 0; i < aux.edges.size(); ++i) {
    const TypedEdge& e = aux.edges[i];
    if (e.u != v && e.v != v) continue;
    Vertex w = e.u == v ? e.v : e.u;
    int kw = h.comp_of[static_cast<std::size_t>(w)];
    int ei = static_cast<int>(i);
    if (kw != -1 && h.is_ancestor(kw, kv)) out.up.push_back(ei);
    if (kw != -1 && h.is_strict_ancestor(kv, kw) &&
        ctx.affected[static_cast<std::size_t>(kw)])
      out.down.push_back(ei);
    if (e.type != kOriginal && ctx.affected[static_cast<std::size_t>(e.type)])
      out.bad.push_back(ei);
    if (ctx.affected[static_cast<std::size_t>(kv)] && ctx.edge_valid(h, e))
      out.star.push_back(ei);
  }
  return out;
}

/// The query graph G*: all vertices of affected components and all valid
/// edges (as indices into aux.edges).
struct QueryGraph {
  std::vector<Vertex> verts;
  std::vector<int> edge_ids;
};

inline QueryGraph query_graph(const AuxGraph& aux, const CoarseHierarchy& h,
                              const QueryContext& ctx) {
  QueryGraph q;
  for (Vertex v = 0; v < aux.n; ++v) {
    int k = h.comp_of[static_cast<std::size_t>(v)];
    if (k != -1 && ctx.affected[static_cast<std::size_t>(k)]) q.verts.push_back(v);
  }
  for (std::size_t i = 0; i < aux.edges.size(); ++i)
    if (ctx.edge_valid(h, aux.edges[i])) q.edge_ids.push_back(static_cast<int>(i));
  return q;
}

/// Connectivity of x,y in G* - F (reference implementation).
inline bool query_graph_connected(const AuxGraph& aux, const CoarseHierarchy& h,
                                  const QueryContext& ctx, Vertex x, Vertex y) {
  if (ctx.faults.contains(x) || ctx.faults.contains(y))
    throw InvalidQuery("query vertex is faulted");
  if (x == y) return true;
  UnionFind uf(aux.n);
  for (std::size_t i = 0; i < aux.edges.size(); ++i) {
    const TypedEdge& e = aux.edges[i];
    if (!ctx.edge_valid(h, e)) continue;
    if (ctx.faults.contains(e.u) || ctx.faults.contains(e.v)) continue;
    uf.unite(e.u, e.v);
  }
  return uf.find(x) == uf.find(y);
}

/// E*_cut(U): valid edges with exactly one endpoint in U, directly.
inline std::vector<int> cut_edges_direct(const AuxGraph& aux, const CoarseHierarchy& h,
                                         const QueryContext& ctx,
                                         const std::vector<Vertex>& u_set) {
  std::vector<char> in_u(static_cast<std::size_t>(aux.n), 0);
  for (Vertex v : u_set) in_u[static_cast<std::size_t>(v)] = 1;
  std::vector<int> out;
  for (std::size_t i = 0; i < aux.edges.size(); ++i) {
    const TypedEdge& e = aux.edges[i];
    if (!ctx.edge_valid(h, e)) continue;
    if (in_u[static_cast<std::size_t>(e.u)] != in_u[static_cast<std::size_t>(e.v)])
      out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace detail {
inline void xor_into(std::vector<int>& acc, const std::vector<int>& more) {
  // Symmetric difference of sorted id sets.
  std::vector<int> merged;
  merged.reserve(acc.size() + more.size());
  std::set_symmetric_difference(acc.begin(), acc.end(), more.begin(), more.end(),
                                std::back_inserter(merged));
  acc = std::move(merged);
}
}  // namespace detail

/// The modular cut-set formula: XOR of per-vertex up-sets with, per affected
/// component K and vertex v in U cap N(H_K), the sets E(v,K) and E_K(v).
inline std::vector<int> cut_edges_formula(const AuxGraph& aux, const CoarseHierarchy& h,
                                          const QueryContext& ctx,
                                          const std::vector<Vertex>& u_set) {
  std::vector<char> in_u(static_cast<std::size_t>(aux.n), 0);
  for (Vertex v : u_set) in_u[static_cast<std::size_t>(v)] = 1;

  std::vector<int> acc;
  // XOR of E_up(v) over v in U.
  for (std::size_t i = 0; i < aux.edges.size(); ++i) {
    const TypedEdge& e = aux.edges[i];
    int parity = 0;
    for (Vertex end : {e.u, e.v}) {
      if (!in_u[static_cast<std::size_t>(end)]) continue;
      Vertex w = end == e.u ? e.v : e.u;
      int kv = h.comp_of[static_cast<std::size_t>(end)];
      int kw = h.comp_of[static_cast<std::size_t>(w)];
      if (kv != -1 && kw != -1 && h.is_ancestor(kw, kv)) parity ^= 1;
    }
    if (parity) acc.push_back(static_cast<int>(i));
  }

  // Per affected K: XOR in E(v,K) and E_K(v) for v in U cap N(H_K).
  for (std::size_t k = 0; k < h.comps.size(); ++k) {
    if (!ctx.affected[k]) continue;
    std::vector<char> in_nb(static_cast<std::size_t>(aux.n), 0);
    for (Vertex v : h.comps[k].nbrs) in_nb[static_cast<std::size_t>(v)] = 1;
    std::vector<int> part;
    for (std::size_t i = 0; i < aux.edges.size(); ++i) {
      const TypedEdge& e = aux.edges[i];
      int parity = 0;
      for (Vertex end : {e.u, e.v}) {
        if (!in_u[static_cast<std::size_t>(end)] || !in_nb[static_cast<std::size_t>(end)])
          continue;
        Vertex w = end == e.u ? e.v : e.u;
        // E(end, K): other endpoint hosted in K itself.
        if (h.comp_of[static_cast<std::size_t>(w)] == static_cast<int>(k)) parity ^= 1;
        // E_K(end): type-K edges incident to end.
        if (e.type == static_cast<int>(k)) parity ^= 1;
      }
      if (parity) part.push_back(static_cast<int>(i));
    }
    detail::xor_into(acc, part);
  }
  return acc;
}

/// Randomized sparsification and orientation.  Runs R = c_sparse * f^3 *
/// ceil(log2 n)^2 rounds; round i samples vertices with probability 1/f and
/// component types with probability 1/(f * ceil(log2 n)), keeps the edges
/// whose endpoints are sampled and whose type is original or sampled, and
/// takes a minimum spanning forest under the depth weight d(e).  The output
/// is the union of the forests, each tree oriented toward its smallest
/// vertex (so each forest contributes out-degree at most 1 per vertex).
inline AuxGraph sparsify_orient(const AuxGraph& aux, int f, std::uint64_t seed,
                                int c_sparse = 4) {
  if (f < 1) throw InvalidQuery("sparsify: f must be >= 1");
  AuxGraph out;
  out.n = aux.n;
  out.depth = aux.depth;
  out.oriented = true;
  out.out.assign(static_cast<std::size_t>(aux.n), {});

  const int lg = std::max(1, static_cast<int>(std::ceil(log2n(aux.n))));
  const long long rounds = static_cast<long long>(c_sparse) * f * f * f * lg * lg;
  int ntypes = 0;
  for (const TypedEdge& e : aux.edges) ntypes = std::max(ntypes, e.type + 1);

  Rng rng(mix64(seed ^ 0x0a0b5a17ULL));
  std::vector<char> in_a(static_cast<std::size_t>(aux.n));
  std::vector<char> in_b(static_cast<std::size_t>(ntypes));
  std::vector<std::size_t> kept;  // indices into aux.edges
  std::vector<WeightedEdge> wedges;
  // Identities already emitted, to deduplicate across rounds.
  std::set<std::tuple<Vertex, Vertex, int>> seen;

  for (long long r = 0; r < rounds; ++r) {
    for (auto& b : in_a) b = rng.below(static_cast<std::uint64_t>(f)) == 0;
    for (auto& b : in_b)
      b = rng.below(static_cast<std::uint64_t>(f) * static_cast<std::uint64_t>(lg)) == 0;
    kept.clear();
    wedges.clear();
    for (std::size_t i = 0; i < aux.edges.size(); ++i) {
      const TypedEdge& e = aux.edges[i];
      if (!in_a[static_cast<std::size_t>(e.u)] || !in_a[static_cast<std::size_t>(e.v)])
        continue;
      if (e.type != kOriginal && !in_b[static_cast<std::size_t>(e.type)]) continue;
      kept.push_back(i);
      wedges.push_back({e.u, e.v, aux.edge_depth(static_cast<int>(i)), e.type});
    }
    if (wedges.empty()) continue;
    auto picked = min_spanning_forest(aux.n, wedges);

    // Orient each tree of M_i toward its smallest vertex: BFS from roots,
    // store child -> parent.
    std::vector<std::vector<std::size_t>> adj(static_cast<std::size_t>(aux.n));
    std::vector<Vertex> touched;
    for (std::size_t pi : picked) {
      adj[static_cast<std::size_t>(wedges[pi].u)].push_back(pi);
      adj[static_cast<std::size_t>(wedges[pi].v)].push_back(pi);
      touched.push_back(wedges[pi].u);
      touched.push_back(wedges[pi].v);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::vector<char> vis(static_cast<std::size_t>(aux.n), 0);
    for (Vertex root : touched) {  // ascending: first hit per tree is its min id
      if (vis[static_cast<std::size_t>(root)]) continue;
      vis[static_cast<std::size_t>(root)] = 1;
      std::queue<Vertex> bfs;
      bfs.push(root);
      while (!bfs.empty()) {
        Vertex p = bfs.front();
        bfs.pop();
        for (std::size_t pi : adj[static_cast<std::size_t>(p)]) {
          Vertex c = wedges[pi].u == p ? wedges[pi].v : wedges[pi].u;
          if (vis[static_cast<std::size_t>(c)]) continue;
          vis[static_cast<std::size_t>(c)] = 1;
          const TypedEdge& orig = aux.edges[kept[pi]];
          if (seen.insert(edge_key(orig)).second) {
            out.out[static_cast<std::size_t>(c)].push_back(
                static_cast<int>(out.edges.size()));
            out.edges.push_back({c, p, orig.type});
          }
          bfs.push(c);
        }
      }
    }
  }
  for (const auto& lst : out.out)
    out.max_outdeg = std::max(out.max_outdeg, static_cast<int>(lst.size()));
  return out;
}

}  // namespace ftcl

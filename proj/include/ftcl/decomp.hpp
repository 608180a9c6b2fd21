#pragma once

#include <algorithm>
#include <atomic>
#include <optional>
#include <queue>
#include <vector>

#include "ftcl/errors.hpp"
#include "ftcl/graph.hpp"
#include "ftcl/rng.hpp"

namespace ftcl {

/// Output of decomp(): a Steiner forest T for the terminal set plus a small
/// separator set B such that T-B has max degree <= s and the components of
/// T-B are pairwise disconnected even in G-B.
struct DecompResult {
  std::vector<Edge> tree;       // forest edges, subgraph of G
  std::vector<Vertex> verts;    // V(T), sorted; includes isolated terminals
  VertexSet bad;                // B
};

inline std::atomic<long long>& decomp_invocations() {
  static std::atomic<long long> count{0};
  return count;
}

/// Verifies the full decomp() contract; throws ConstructionError on failure.
inline void check_decomp_contract(const Graph& g, const VertexSet& terminals, int s,
                                  const DecompResult& r) {
  auto fail = [](const char* what) { throw ConstructionError(std::string("decomp contract: ") + what); };
  const auto& U = terminals;
  if (U.empty()) {
    if (!r.tree.empty() || !r.bad.empty()) fail("nonempty output for empty terminal set");
    return;
  }
  std::vector<char> in_t(g.n(), 0);
  for (Vertex v : r.verts) in_t[v] = 1;
  for (Vertex u : U)
    if (!in_t[u]) fail("terminal missing from V(T)");

  // T is a forest of G-edges on r.verts.
  UnionFind tf(g.n());
  for (const Edge& e : r.tree) {
    if (!g.has_edge(e.u, e.v)) fail("tree edge not in G");
    if (!in_t[e.u] || !in_t[e.v]) fail("tree edge endpoint outside V(T)");
    if (!tf.unite(e.u, e.v)) fail("cycle in T");
  }

  // Each maximal U-subset connected in G lies in (and is connected by) one tree.
  auto gcomp = connected_components(g);
  std::vector<int> tree_of_gcomp(g.n(), -2);
  for (Vertex u : U) {
    int gc = gcomp[u], tc = tf.find(u);
    if (tree_of_gcomp[gc] == -2)
      tree_of_gcomp[gc] = tc;
    else if (tree_of_gcomp[gc] != tc)
      fail("terminals connected in G split across trees");
  }

  // Degrees in T-B.
  std::vector<int> deg(g.n(), 0);
  for (const Edge& e : r.tree)
    if (!r.bad.contains(e.u) && !r.bad.contains(e.v)) ++deg[e.u], ++deg[e.v];
  for (Vertex v : r.verts)
    if (!r.bad.contains(v) && deg[v] > s) fail("max degree of T-B exceeds s");

  // Components of T-B must be pairwise disconnected in G-B.
  UnionFind tb(g.n());
  for (const Edge& e : r.tree)
    if (!r.bad.contains(e.u) && !r.bad.contains(e.v)) tb.unite(e.u, e.v);
  UnionFind gb(g.n());
  for (const Edge& e : g.edges())
    if (!r.bad.contains(e.u) && !r.bad.contains(e.v)) gb.unite(e.u, e.v);
  std::vector<int> seen_tcomp(g.n(), -1);  // representative T-B comp per G-B comp
  for (Vertex v : r.verts) {
    if (r.bad.contains(v)) continue;
    int gc = gb.find(v), tc = tb.find(v);
    if (seen_tcomp[gc] == -1)
      seen_tcomp[gc] = tc;
    else if (seen_tcomp[gc] != tc)
      fail("distinct components of T-B connected in G-B");
  }

  // Size bounds: |B| < |U|/(s-2) and |B cap U| < |U|/(s-1), strict.
  long long nu = static_cast<long long>(U.size());
  long long nb = static_cast<long long>(r.bad.size());
  long long nbu = 0;
  for (Vertex v : r.bad)
    if (U.contains(v)) ++nbu;
  if (nb * (s - 2) >= nu) fail("|B| bound violated");
  if (nbu * (s - 1) >= nu) fail("|B cap U| bound violated");
}

namespace detail {

/// Mutable tree state for the decomp local search.
struct SteinerTree {
  const Graph* g;
  std::vector<std::vector<Vertex>> adj;  // tree adjacency
  std::vector<char> in_tree;
  std::vector<int> deg;
  const std::vector<char>* is_term;

  explicit SteinerTree(const Graph& graph, const std::vector<char>& term)
      : g(&graph), adj(graph.n()), in_tree(graph.n(), 0), deg(graph.n(), 0), is_term(&term) {}

  void add_edge(Vertex a, Vertex b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    ++deg[a], ++deg[b];
    in_tree[a] = in_tree[b] = 1;
  }
  void remove_edge(Vertex a, Vertex b) {
    auto drop = [&](Vertex x, Vertex y) {
      auto& v = adj[x];
      v.erase(std::find(v.begin(), v.end(), y));
      --deg[x];
    };
    drop(a, b);
    drop(b, a);
  }

  /// Repeatedly removes non-terminal leaves so every leaf is a terminal.
  void prune() {
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < g->n(); ++v)
      if (in_tree[v] && deg[v] <= 1 && !(*is_term)[v]) stack.push_back(v);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (!in_tree[v] || deg[v] > 1 || (*is_term)[v]) continue;
      if (deg[v] == 1) {
        Vertex w = adj[v][0];
        remove_edge(v, w);
        if (deg[w] <= 1 && !(*is_term)[w]) stack.push_back(w);
      }
      in_tree[v] = 0;
    }
  }
};

/// One connected component's worth of decomp. Two phases of local search:
/// first Fuerer-Raghavachari-style degree reduction on the Steiner tree, then
/// a separation phase that reroutes violating G-paths through the tree or, if
/// no rerouting helps, permanently discards a path vertex into B.
inline bool decomp_component(const Graph& g, const std::vector<Vertex>& terms, int s, Rng rng,
                             bool randomize, std::vector<Edge>& out_edges,
                             std::vector<Vertex>& out_verts, std::vector<Vertex>& out_bad) {
  const int n = g.n();
  std::vector<char> is_term(n, 0);
  for (Vertex u : terms) is_term[u] = 1;

  SteinerTree t(g, is_term);
  {
    // Initial tree: BFS spanning tree from a terminal, pruned to the terminals.
    Vertex src = terms[randomize ? static_cast<size_t>(rng.below(terms.size())) : 0];
    std::vector<char> seen(n, 0);
    std::queue<Vertex> q;
    q.push(src);
    seen[src] = 1;
    t.in_tree[src] = 1;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      std::vector<Vertex> nb = g.neighbors(u);
      if (randomize)
        for (size_t i = nb.size(); i > 1; --i) std::swap(nb[i - 1], nb[rng.below(i)]);
      for (Vertex w : nb)
        if (!seen[w]) {
          seen[w] = 1;
          t.add_edge(u, w);
          q.push(w);
        }
    }
    t.prune();
  }

  std::vector<char> in_b(n, 0);
  std::vector<int> comp(n, -1);
  std::vector<Vertex> bfs_par(n);
  std::vector<int> lab(n);

  // Searches for a G-path between two distinct components of T - in_b whose
  // interior avoids V(T) and in_b. On success fills `path` (x ... y, both
  // endpoints in V(T) - in_b) and `tpath` (tree path y ... x) and returns true.
  std::vector<Vertex> path, tpath;
  std::vector<std::pair<Vertex, Vertex>> collisions;
  auto find_violation = [&]() -> bool {
    std::fill(comp.begin(), comp.end(), -1);
    int ncomp = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!t.in_tree[v] || in_b[v] || comp[v] >= 0) continue;
      comp[v] = ncomp;
      std::vector<Vertex> stack{v};
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : t.adj[u])
          if (!in_b[w] && comp[w] < 0) {
            comp[w] = ncomp;
            stack.push_back(w);
          }
      }
      ++ncomp;
    }
    if (ncomp <= 1) return false;

    std::fill(lab.begin(), lab.end(), -1);
    std::queue<Vertex> q;
    for (Vertex v = 0; v < n; ++v)
      if (t.in_tree[v] && !in_b[v]) {
        lab[v] = comp[v];
        bfs_par[v] = -1;
        q.push(v);
      }
    collisions.clear();
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : g.neighbors(u)) {
        if (in_b[w]) continue;
        if (lab[w] < 0) {
          lab[w] = lab[u];
          bfs_par[w] = u;
          q.push(w);
        } else if (lab[w] != lab[u] && lab[u] < lab[w]) {
          collisions.push_back({u, w});
        }
      }
    }
    return !collisions.empty();
  };

  // Materializes collision (ca, cb) into `path` and `tpath`.
  auto take_collision = [&](std::pair<Vertex, Vertex> c) {
    auto [ca, cb] = c;
    auto climb = [&](Vertex v) {
      std::vector<Vertex> p{v};
      while (bfs_par[p.back()] != -1) p.push_back(bfs_par[p.back()]);
      return p;  // v ... source
    };
    std::vector<Vertex> pa = climb(ca), pb = climb(cb);
    path.assign(pa.rbegin(), pa.rend());            // x ... ca
    path.insert(path.end(), pb.begin(), pb.end());  // ... cb ... y

    // Tree path from y up to x, via rooting the tree at x.
    std::vector<Vertex> tpar(n, -2);
    std::vector<Vertex> stack{path.front()};
    tpar[path.front()] = -1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : t.adj[u])
        if (tpar[w] == -2) {
          tpar[w] = u;
          stack.push_back(w);
        }
    }
    if (tpar[path.back()] == -2) throw ConstructionError("decomp: tree not connected");
    tpath.clear();
    for (Vertex v = path.back(); v != -1; v = tpar[v]) tpath.push_back(v);
  };

  // The swap: reroute the tree through the violating path, removing a tree
  // edge at the separator vertex tpath[pick] (toward x) to break the cycle.
  auto apply_swap = [&](size_t pick) {
    t.remove_edge(tpath[pick], tpath[pick + 1]);
    for (size_t i = 0; i + 1 < path.size(); ++i) t.add_edge(path[i], path[i + 1]);
    t.prune();
  };
  auto max_deg_cand = [&]() {
    size_t pick = tpath.size();
    for (size_t i = 1; i + 1 < tpath.size(); ++i)
      if (in_b[tpath[i]] && (pick == tpath.size() || t.deg[tpath[i]] > t.deg[tpath[pick]]))
        pick = i;
    if (pick == tpath.size()) throw ConstructionError("decomp: no separator vertex on tree path");
    return pick;
  };

  bool converged = false;
  long long budget = 32LL * (n + g.m()) + 256;

  // Phase 1: push the tree's max degree down while violating paths permit it.
  // Only swaps unloading a vertex of the current max degree d are applied
  // (the count of degree-d vertices then drops, so this phase terminates).
  // If no violating path exists at all for B = {deg >= d-1} and d <= s+2,
  // that stall certifies separation for a contract-ready B.
  while (budget-- > 0) {
    int d = 0;
    for (Vertex v = 0; v < n; ++v)
      if (t.in_tree[v]) d = std::max(d, t.deg[v]);
    if (d <= s) break;
    std::fill(in_b.begin(), in_b.end(), 0);
    for (Vertex v = 0; v < n; ++v)
      if (t.in_tree[v] && t.deg[v] >= d - 1) in_b[v] = 1;
    if (!find_violation()) {
      if (d <= s + 2) {
        out_bad.clear();
        for (Vertex v = 0; v < n; ++v)
          if (in_b[v]) out_bad.push_back(v);
        converged = true;
      }
      break;  // hard stall; fall through to phase 2 unless certified above
    }
    bool swapped = false;
    for (const auto& c : collisions) {
      take_collision(c);
      size_t pick = max_deg_cand();
      if (t.deg[tpath[pick]] == d) {
        apply_swap(pick);
        swapped = true;
        break;
      }
    }
    if (!swapped) break;  // soft stall: degree-(d-1) barrier; phase 2 takes over
  }

  // Phase 2: enforce separation for B = {deg >= s+1} plus repairs.
  std::vector<char> extra_bad(n, 0);  // repair vertices, removed for good
  budget = 32LL * (n + g.m()) + 256;
  while (!converged && budget-- > 0) {
    std::fill(in_b.begin(), in_b.end(), 0);
    out_bad.clear();
    for (Vertex v = 0; v < n; ++v)
      if ((t.in_tree[v] && t.deg[v] >= s + 1) || extra_bad[v]) in_b[v] = 1, out_bad.push_back(v);
    if (!find_violation()) {
      converged = true;
      break;
    }
    // Prefer a collision admitting an improving swap; repair only if none does.
    size_t chosen = SIZE_MAX, chosen_pick = 0;
    for (size_t i = 0; i < collisions.size(); ++i) {
      take_collision(collisions[i]);
      size_t pick = max_deg_cand();
      if (t.deg[tpath[pick]] >= std::max(t.deg[path.front()], t.deg[path.back()]) + 2) {
        chosen = i;
        chosen_pick = pick;
        break;
      }
    }
    if (chosen != SIZE_MAX) {
      // Improving swap: shrinks the degree profile lexicographically from the
      // top (both gaining endpoints stay strictly below w), so it terminates.
      take_collision(collisions[chosen]);
      apply_swap(chosen_pick);
      continue;
    }
    take_collision(collisions[0]);
    Vertex x = path.front(), y = path.back();
    // No improving swap anywhere: repair by permanently discarding one
    // of its vertices into B. Prefer an interior vertex (outside the tree, so
    // the tree is untouched); fall back to the busier endpoint.
    Vertex drop;
    if (path.size() > 2) {
      std::vector<Vertex> interior(path.begin() + 1, path.end() - 1);
      drop = interior[randomize ? static_cast<size_t>(rng.below(interior.size()))
                                : interior.size() / 2];
    } else {
      drop = t.deg[x] >= t.deg[y] ? x : y;
      if (randomize && rng.coin(0.3)) drop = (drop == x) ? y : x;
    }
    extra_bad[drop] = 1;
  }

  if (!converged) return false;  // iteration budget exhausted

  out_edges.clear();
  out_verts.clear();
  for (Vertex v = 0; v < n; ++v)
    if (t.in_tree[v]) {
      out_verts.push_back(v);
      for (Vertex u : t.adj[v])
        if (u > v) out_edges.push_back({v, u});
    }
  return true;
}

}  // namespace detail

/// Decomp(G, U, s): Steiner forest + separator set satisfying the contract
/// enforced by check_decomp_contract. Deterministic for a fixed seed.
inline DecompResult decomp(const Graph& g, const VertexSet& terminals, int s, uint64_t seed = 0) {
  if (s < 3) throw InvalidQuery("decomp: s must be >= 3");
  for (Vertex u : terminals)
    if (u < 0 || u >= g.n()) throw InvalidQuery("decomp: terminal out of range");
  decomp_invocations()++;

  DecompResult r;
  if (!terminals.empty()) {
    auto gcomp = connected_components(g);
    std::vector<std::vector<Vertex>> terms_by_comp(g.n());
    for (Vertex u : terminals) terms_by_comp[gcomp[u]].push_back(u);

    std::vector<Vertex> bad_all;
    for (int c = 0; c < g.n(); ++c) {
      if (terms_by_comp[c].empty()) continue;
      bool ok = false;
      for (int attempt = 0; attempt < 24 && !ok; ++attempt) {
        std::vector<Edge> te;
        std::vector<Vertex> tv, tb;
        Rng rng(mix64(seed ^ (0x5eedull + attempt)) ^ mix64(static_cast<uint64_t>(c)));
        ok = detail::decomp_component(g, terms_by_comp[c], s, rng, attempt > 0, te, tv, tb);
        if (ok) {
          r.tree.insert(r.tree.end(), te.begin(), te.end());
          r.verts.insert(r.verts.end(), tv.begin(), tv.end());
          bad_all.insert(bad_all.end(), tb.begin(), tb.end());
        }
      }
      if (!ok) throw ConstructionError("decomp: local search failed to converge");
    }
    std::sort(r.tree.begin(), r.tree.end());
    std::sort(r.verts.begin(), r.verts.end());
    r.bad = VertexSet(std::move(bad_all));
  }
  check_decomp_contract(g, terminals, s, r);
  return r;
}

}  // namespace ftcl

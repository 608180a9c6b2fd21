#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftcl/decomp.hpp"
#include "ftcl/errors.hpp"
#include "ftcl/graph.hpp"

namespace ftcl {

/// One component gamma of the base hierarchy.
struct BaseComp {
  std::vector<Vertex> members;       // gamma itself, sorted
  int level = 0;                     // 0-based; roots sit at the top level
  int parent = -1;                   // index into BaseHierarchy::comps
  std::vector<int> children;
  std::vector<Edge> tree;            // T0(gamma): subtree spanning members (may have Steiner points)
  std::vector<Vertex> tree_verts;    // V(T0(gamma)), sorted
  std::vector<Vertex> sub_verts;     // V(H0_gamma): members of all descendants incl. self, sorted
  std::vector<Vertex> nbrs;          // N(H0_gamma): G-neighbors outside sub_verts, sorted
};

/// Base hierarchy of one connected region of the graph: the laminar family of
/// components produced by iterating decomp with shrinking terminal sets.
struct BaseHierarchy {
  std::vector<Vertex> region;            // vertices covered, sorted
  int levels = 0;                        // L: number of decomp rounds
  std::vector<BaseComp> comps;
  std::vector<int> comp_of;              // vertex -> comp index (-1 outside region)
  std::vector<Edge> t_union;             // union of T_i - B_i over all rounds, sorted
  std::vector<std::vector<Vertex>> b_sets;  // B_1..B_L (B_L empty), sorted

  bool is_strict_ancestor(int a, int d) const {
    for (int p = comps[d].parent; p != -1; p = comps[p].parent)
      if (p == a) return true;
    return false;
  }
};

/// Builds the base hierarchy for the connected component of g containing the
/// given vertices (which must all lie in one component).
inline BaseHierarchy build_base_hierarchy(const Graph& g, const std::vector<Vertex>& region,
                                          int s = 4, uint64_t seed = 0) {
  if (region.empty()) throw InvalidQuery("hierarchy: empty region");
  BaseHierarchy h;
  h.region = region;
  std::sort(h.region.begin(), h.region.end());
  const int n = g.n();
  std::vector<char> in_region(n, 0);
  for (Vertex v : h.region) in_region[v] = 1;

  // Iterate (T_i, B_i) <- decomp(G, B_{i-1}, s) with B_0 = region until B = {}.
  std::vector<std::vector<Edge>> trees;    // T_1..T_L
  std::vector<std::vector<Vertex>> bsets;  // B_1..B_L
  VertexSet u(std::vector<Vertex>(h.region));
  while (true) {
    DecompResult r = decomp(g, u, s, mix64(seed) + trees.size());
    trees.push_back(r.tree);
    bsets.push_back(r.bad.items());
    if (r.bad.empty()) break;
    if (r.bad.size() >= u.size())
      throw ConstructionError("hierarchy: separator set failed to shrink");
    u = r.bad;
  }
  const int L = static_cast<int>(trees.size());
  h.levels = L;
  h.b_sets = bsets;

  for (int i = 0; i < L; ++i) {
    std::vector<Vertex>& b = bsets[i];
    std::vector<char> in_b(n, 0);
    for (Vertex v : b) in_b[v] = 1;
    for (const Edge& e : trees[i])
      if (!in_b[e.u] && !in_b[e.v]) h.t_union.push_back(e);
  }
  std::sort(h.t_union.begin(), h.t_union.end());
  h.t_union.erase(std::unique(h.t_union.begin(), h.t_union.end()), h.t_union.end());

  // level(v) = largest i in [0, L-1] with v in B_i  (B_0 = region).
  std::vector<int> level(n, -1);
  for (Vertex v : h.region) level[v] = 0;
  for (int i = 1; i < L; ++i)
    for (Vertex v : bsets[i - 1]) level[v] = i;

  // region_id[i][v]: component of v in region minus (B_{i+1} u ... u B_{L-1}).
  std::vector<std::vector<int>> region_id(L, std::vector<int>(n, -1));
  for (int i = 0; i < L; ++i) {
    std::vector<char> removed(n, 0);
    for (int j = i + 1; j <= L - 1; ++j)  // B_{i+1}..B_{L-1}; bsets[j-1] = B_j
      for (Vertex v : bsets[j - 1]) removed[v] = 1;
    int nid = 0;
    for (Vertex src : h.region) {
      if (removed[src] || region_id[i][src] >= 0) continue;
      std::vector<Vertex> stack{src};
      region_id[i][src] = nid;
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (Vertex w : g.neighbors(x))
          if (in_region[w] && !removed[w] && region_id[i][w] < 0) {
            region_id[i][w] = nid;
            stack.push_back(w);
          }
      }
      ++nid;
    }
  }

  // Components: vertices of level i grouped by region_id[i].
  std::vector<std::vector<int>> comp_at(L);  // (level, region id) -> comp index
  for (int i = 0; i < L; ++i) comp_at[i].assign(n, -1);
  h.comp_of.assign(n, -1);
  for (Vertex v : h.region) {
    int i = level[v];
    int rid = region_id[i][v];
    int& ci = comp_at[i][rid];
    if (ci < 0) {
      ci = static_cast<int>(h.comps.size());
      h.comps.push_back({});
      h.comps[ci].level = i;
    }
    h.comps[ci].members.push_back(v);
    h.comp_of[v] = ci;
  }
  for (auto& c : h.comps) std::sort(c.members.begin(), c.members.end());

  // Parent: nearest higher level whose region around the component is
  // inhabited by a component of that level.
  for (size_t ci = 0; ci < h.comps.size(); ++ci) {
    BaseComp& c = h.comps[ci];
    Vertex v0 = c.members[0];
    for (int j = c.level + 1; j < L; ++j) {
      int pc = comp_at[j][region_id[j][v0]];
      if (pc >= 0) {
        c.parent = pc;
        h.comps[pc].children.push_back(static_cast<int>(ci));
        break;
      }
    }
  }

  // V(H0_gamma) and N(H0_gamma): the region around gamma at gamma's level.
  for (auto& c : h.comps) {
    int i = c.level, rid = region_id[i][c.members[0]];
    for (Vertex v : h.region)
      if (region_id[i][v] == rid) c.sub_verts.push_back(v);
    std::vector<Vertex> nb;
    for (Vertex v : c.sub_verts)
      for (Vertex w : g.neighbors(v))
        if (region_id[i][w] != rid) nb.push_back(w);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    c.nbrs = std::move(nb);
  }

  // T0(gamma): minimal subtree of T_{i+1} - B_{i+1} spanning gamma.
  for (auto& c : h.comps) {
    int i = c.level;
    const auto& tr = trees[i];                              // T_{i+1}
    std::vector<char> in_b(n, 0);
    if (i + 1 <= L - 1)
      for (Vertex v : bsets[i]) in_b[v] = 1;                // B_{i+1}
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : tr)
      if (!in_b[e.u] && !in_b[e.v]) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
      }
    // Connected subtree containing the members.
    std::vector<char> keep(n, 0);
    std::vector<Vertex> stack{c.members[0]};
    keep[c.members[0]] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex w : adj[x])
        if (!keep[w]) {
          keep[w] = 1;
          stack.push_back(w);
        }
    }
    for (Vertex v : c.members)
      if (!keep[v]) throw ConstructionError("hierarchy: component split across subtrees");
    // Prune to the minimal subtree: drop non-member leaves repeatedly.
    std::vector<char> is_m(n, 0);
    for (Vertex v : c.members) is_m[v] = 1;
    std::vector<int> deg(n, 0);
    std::vector<Vertex> kept;
    for (Vertex v : h.region)
      if (keep[v]) {
        kept.push_back(v);
        deg[v] = 0;
      }
    for (Vertex v : kept)
      for (Vertex w : adj[v])
        if (keep[w]) ++deg[v];
    std::vector<Vertex> leaf;
    for (Vertex v : kept)
      if (deg[v] <= 1 && !is_m[v]) leaf.push_back(v);
    while (!leaf.empty()) {
      Vertex v = leaf.back();
      leaf.pop_back();
      if (!keep[v] || deg[v] > 1 || is_m[v]) continue;
      keep[v] = 0;
      for (Vertex w : adj[v])
        if (keep[w]) {
          --deg[w];
          if (deg[w] <= 1 && !is_m[w]) leaf.push_back(w);
        }
    }
    for (Vertex v : kept)
      if (keep[v]) {
        c.tree_verts.push_back(v);
        for (Vertex w : adj[v])
          if (keep[w] && w > v) c.tree.push_back({v, w});
      }
    std::sort(c.tree.begin(), c.tree.end());
  }

  return h;
}

/// Checks the structural guarantees of a base hierarchy against the graph.
/// Throws ConstructionError with a description on failure.
inline void check_base_hierarchy(const Graph& g, const BaseHierarchy& h) {
  auto fail = [](const char* what) { throw ConstructionError(std::string("hierarchy: ") + what); };
  const int n = static_cast<int>(h.region.size());
  // Depth bound L <= log2 n - 1 (trivial regions of < 4 vertices collapse in one round).
  double bound = n >= 4 ? std::log2(static_cast<double>(n)) - 1.0 : 1.0;
  if (static_cast<double>(h.levels) > bound + 1e-9) fail("too many levels");

  // Max degree of the tree union <= 2 log2 n.
  std::vector<int> deg(g.n(), 0);
  for (const Edge& e : h.t_union) ++deg[e.u], ++deg[e.v];
  double dbound = 2.0 * std::log2(std::max(2.0, static_cast<double>(n)));
  for (Vertex v : h.region)
    if (static_cast<double>(deg[v]) > dbound + 1e-9) fail("tree union degree too high");

  // Components partition the region; parents sit at strictly higher levels;
  // members of each component appear in its subtree.
  std::vector<int> seen(g.n(), 0);
  for (const auto& c : h.comps) {
    for (Vertex v : c.members) ++seen[v];
    if (c.parent != -1 && h.comps[c.parent].level <= c.level) fail("parent level not higher");
    std::vector<char> tv(g.n(), 0);
    for (Vertex v : c.tree_verts) tv[v] = 1;
    for (Vertex v : c.members)
      if (!tv[v]) fail("member missing from component subtree");
    UnionFind uf(g.n());
    for (const Edge& e : c.tree)
      if (!uf.unite(e.u, e.v)) fail("component subtree has a cycle");
    for (Vertex v : c.members)
      if (uf.find(v) != uf.find(c.members[0])) fail("component subtree disconnected");
  }
  for (Vertex v : h.region)
    if (seen[v] != 1) fail("components do not partition the region");
}

}  // namespace ftcl

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftcl/hierarchy.hpp"
#include "ftcl/partition.hpp"

namespace ftcl {

/// One component K of a coarsened hierarchy.
struct CoarseComp {
  std::vector<Vertex> members;   // K, sorted
  Vertex root = -1;              // r_K: smallest vertex id in K
  int parent = -1;
  std::vector<int> children;
  int depth = 0;                 // root components have depth 0
  std::vector<Edge> tree;        // T(K): spanning tree of K, no Steiner points
  std::vector<Vertex> sub_verts; // V(H_K), sorted
  std::vector<Vertex> nbrs;      // N(H_K), sorted
};

/// Per-color coarsening H(S) of a base hierarchy: components are unions of
/// connected subtrees of H0, each spanned by a Steiner-free tree in which
/// only S-vertices may have large degree.
struct CoarseHierarchy {
  std::vector<Vertex> region;        // vertices covered, sorted
  std::vector<char> in_s;            // indicator of S over all of V(G)
  std::vector<CoarseComp> comps;
  std::vector<int> comp_of;          // K_v (-1 outside region)

  bool is_strict_ancestor(int a, int d) const {
    for (int p = comps[d].parent; p != -1; p = comps[p].parent)
      if (p == a) return true;
    return false;
  }
  bool is_ancestor(int a, int d) const { return a == d || is_strict_ancestor(a, d); }
};

namespace detail {

/// Mutable unification state over the base components of one hierarchy.
struct CoarsenState {
  const Graph* g;
  const BaseHierarchy* h;
  const std::vector<char>* in_s;
  UnionFind uf;                          // over base comp indices
  std::vector<int> top;                  // per part root: highest base comp
  std::vector<std::vector<Edge>> acc;    // per part root: accumulated tree edges

  CoarsenState(const Graph& graph, const BaseHierarchy& hier, const std::vector<char>& s)
      : g(&graph), h(&hier), in_s(&s), uf(static_cast<int>(hier.comps.size())),
        top(hier.comps.size()), acc(hier.comps.size()) {
    for (size_t i = 0; i < hier.comps.size(); ++i) {
      top[i] = static_cast<int>(i);
      acc[i] = hier.comps[i].tree;  // T0(gamma), may contain Steiner points
    }
  }

  int part_of_vertex(Vertex v) { return uf.find(h->comp_of[v]); }
  int parent_part(int p) {
    int bp = h->comps[top[p]].parent;
    return bp < 0 ? -1 : uf.find(bp);
  }
  bool is_strict_desc(int d, int a) {
    for (int p = parent_part(d); p != -1; p = parent_part(p))
      if (p == a) return true;
    return false;
  }
  /// Child part of `a` on the path down to strict descendant `d`.
  int child_toward(int a, int d) {
    int cur = d;
    for (int p = parent_part(cur); p != a; p = parent_part(cur)) {
      if (p == -1) throw ConstructionError("coarsen: descendant chain broken");
      cur = p;
    }
    return cur;
  }
  std::vector<Vertex> part_members(int p) {
    std::vector<Vertex> out;
    for (size_t i = 0; i < h->comps.size(); ++i)
      if (uf.find(static_cast<int>(i)) == p)
        out.insert(out.end(), h->comps[i].members.begin(), h->comps[i].members.end());
    return out;
  }

  /// Smallest G-edge from part k0 into the subtree of parts below (and
  /// including) part `sub`; also reports the part of the far endpoint.
  bool subtree_edge(int k0, int sub, Edge& best, int& far_part) {
    bool found = false;
    for (Vertex v : part_members(k0))
      for (Vertex w : g->neighbors(v)) {
        if (h->comp_of[w] < 0) continue;
        int pw = uf.find(h->comp_of[w]);
        if (pw != sub && !is_strict_desc(pw, sub)) continue;
        Edge e = make_edge(v, w);
        if (!found || e < best) {
          best = e;
          far_part = pw;
          found = true;
        }
      }
    return found;
  }

  /// Algorithm: Unify(K0, L). Returns edges joining {K0} u L (and possibly
  /// more parts) into a connected subtree of the current hierarchy.
  void unify(int k0, std::vector<int> l, std::vector<Edge>& out) {
    std::erase(l, k0);
    if (l.empty()) return;
    // Group L members under the children of K0 they descend from.
    std::vector<std::pair<int, std::vector<int>>> groups;  // (child part, L_i)
    for (int li : l) {
      int c = child_toward(k0, li);
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& gr) { return gr.first == c; });
      if (it == groups.end())
        groups.push_back({c, {li}});
      else
        it->second.push_back(li);
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [child, li] : groups) {
      Edge ei{};
      int far = -1;
      if (!subtree_edge(k0, child, ei, far))
        throw ConstructionError("coarsen: no edge into child subtree");
      li.push_back(far);
      unify(child, li, out);
      out.push_back(ei);
    }
  }

  /// Merges all parts containing endpoints of `edges` into the part `into`,
  /// accumulating the connecting edges. Returns number of merges performed.
  int merge_span(const std::vector<Edge>& edges, int into) {
    int merges = 0;
    std::vector<Edge> added = edges;
    int root = into;
    for (const Edge& e : edges)
      for (Vertex v : {e.u, e.v}) {
        int p = uf.find(h->comp_of[v]);
        int r = uf.find(root);
        if (p == r) continue;
        // Keep the data of the topmost side.
        int t_keep = h->comps[top[r]].level >= h->comps[top[p]].level ? top[r] : top[p];
        std::vector<Edge> merged = std::move(acc[r]);
        merged.insert(merged.end(), acc[p].begin(), acc[p].end());
        uf.unite(p, r);
        root = uf.find(r);
        top[root] = t_keep;
        acc[root] = std::move(merged);
        ++merges;
      }
    int r = uf.find(root);
    acc[r].insert(acc[r].end(), added.begin(), added.end());
    return merges;
  }
};

}  // namespace detail

/// Coarsens one base hierarchy for color class S (Algorithm: the unification
/// loop over base components in postorder, run to a fixpoint).
inline CoarseHierarchy coarsen(const Graph& g, const BaseHierarchy& h, const ColorPartition& part,
                               int color) {
  std::vector<char> in_s(g.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v)
    if (v < static_cast<int>(part.color.size()) && part.color[v] == color) in_s[v] = 1;

  detail::CoarsenState st(g, h, in_s);

  // Postorder over base components (children before parents, index order
  // among siblings).
  std::vector<int> post;
  {
    std::vector<int> roots;
    for (size_t i = 0; i < h.comps.size(); ++i)
      if (h.comps[i].parent == -1) roots.push_back(static_cast<int>(i));
    std::vector<std::pair<int, size_t>> stack;  // (comp, next child)
    for (int r : roots) {
      stack.push_back({r, 0});
      while (!stack.empty()) {
        auto& [c, next] = stack.back();
        if (next < h.comps[c].children.size()) {
          int ch = h.comps[c].children[next++];
          stack.push_back({ch, 0});
        } else {
          post.push_back(c);
          stack.pop_back();
        }
      }
    }
  }

  // Trigger scan for one base component gamma: the lexicographically smallest
  // edge from gamma (type i: tree-union edge; type ii: any G-edge out of an
  // S-vertex of gamma) into a strict descendant part of gamma's current part.
  auto find_trigger = [&](int gi, Edge& best, int& k1) -> bool {
    int kg = st.uf.find(gi);
    bool found = false;
    auto consider = [&](Vertex a, Vertex b) {  // a in gamma, b the far end
      if (h.comp_of[b] < 0) return;
      int pb = st.uf.find(h.comp_of[b]);
      if (pb == kg || !st.is_strict_desc(pb, kg)) return;
      Edge e = make_edge(a, b);
      if (!found || e < best) {
        best = e;
        k1 = pb;
        found = true;
      }
    };
    for (Vertex v : h.comps[gi].members) {
      bool sv = in_s[v];
      for (const Edge& e : h.t_union)
        if (e.u == v || e.v == v) consider(v, e.u == v ? e.v : e.u);
      if (sv)
        for (Vertex w : g.neighbors(v)) consider(v, w);
    }
    return found;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (int gi : post) {
      while (true) {
        Edge eg{};
        int k1 = -1;
        if (!find_trigger(gi, eg, k1)) break;
        int kg = st.uf.find(gi);
        int k0 = st.child_toward(kg, k1);
        std::vector<Edge> span;
        st.unify(k0, {k1}, span);
        span.push_back(eg);
        st.merge_span(span, kg);
        changed = true;
      }
    }
  }

  // Assemble the final hierarchy.
  CoarseHierarchy ch;
  ch.region = h.region;
  ch.in_s = in_s;
  ch.comp_of.assign(g.n(), -1);
  std::vector<int> part_id(h.comps.size(), -1);
  for (size_t i = 0; i < h.comps.size(); ++i) {
    int r = st.uf.find(static_cast<int>(i));
    if (part_id[r] == -1) {
      part_id[r] = static_cast<int>(ch.comps.size());
      ch.comps.push_back({});
    }
    auto& c = ch.comps[part_id[r]];
    c.members.insert(c.members.end(), h.comps[i].members.begin(), h.comps[i].members.end());
  }
  for (size_t i = 0; i < h.comps.size(); ++i) {
    int r = st.uf.find(static_cast<int>(i));
    for (Vertex v : h.comps[i].members) ch.comp_of[v] = part_id[r];
  }
  // Parent links from the top base components.
  for (size_t i = 0; i < h.comps.size(); ++i) {
    int r = st.uf.find(static_cast<int>(i));
    if (static_cast<int>(i) != st.top[r]) continue;
    int pp = st.parent_part(r);
    if (pp != -1) {
      ch.comps[part_id[r]].parent = part_id[pp];
      ch.comps[part_id[pp]].children.push_back(part_id[r]);
    }
  }
  for (auto& c : ch.comps) {
    std::sort(c.members.begin(), c.members.end());
    c.root = c.members.front();
    std::sort(c.children.begin(), c.children.end());
  }
  // Depths, top-down.
  {
    std::vector<int> order;
    for (size_t i = 0; i < ch.comps.size(); ++i)
      if (ch.comps[i].parent == -1) order.push_back(static_cast<int>(i));
    for (size_t at = 0; at < order.size(); ++at) {
      int c = order[at];
      ch.comps[c].depth = ch.comps[c].parent == -1 ? 0 : ch.comps[ch.comps[c].parent].depth + 1;
      for (int ct : ch.comps[c].children) order.push_back(ct);
    }
  }
  // Spanning trees: deterministic BFS from r_K over the accumulated edges.
  for (size_t i = 0; i < h.comps.size(); ++i) {
    int r = st.uf.find(static_cast<int>(i));
    if (static_cast<int>(i) != st.top[r]) continue;
    auto& c = ch.comps[part_id[r]];
    std::vector<Edge> es = std::move(st.acc[r]);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    std::vector<std::vector<Vertex>> adj(g.n());
    for (const Edge& e : es) {
      if (ch.comp_of[e.u] != part_id[r] || ch.comp_of[e.v] != part_id[r])
        throw ConstructionError("coarsen: Steiner point survived unification");
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> queue{c.root};
    seen[c.root] = 1;
    size_t reached = 1;
    for (size_t at = 0; at < queue.size(); ++at) {
      Vertex v = queue[at];
      std::sort(adj[v].begin(), adj[v].end());
      for (Vertex w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          c.tree.push_back(make_edge(v, w));
          queue.push_back(w);
        }
    }
    if (reached != c.members.size())
      throw ConstructionError("coarsen: accumulated edges do not span the component");
    std::sort(c.tree.begin(), c.tree.end());
  }
  // V(H_K) and N(H_K), bottom-up.
  {
    std::vector<int> order;  // children-before-parents
    for (size_t i = 0; i < ch.comps.size(); ++i)
      if (ch.comps[i].parent == -1) order.push_back(static_cast<int>(i));
    for (size_t at = 0; at < order.size(); ++at)
      for (int ct : ch.comps[order[at]].children) order.push_back(ct);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto& c = ch.comps[*it];
      c.sub_verts = c.members;
      for (int ct : c.children)
        c.sub_verts.insert(c.sub_verts.end(), ch.comps[ct].sub_verts.begin(),
                           ch.comps[ct].sub_verts.end());
      std::sort(c.sub_verts.begin(), c.sub_verts.end());
      std::vector<Vertex> nb;
      for (Vertex v : c.sub_verts)
        for (Vertex w : g.neighbors(v))
          if (!std::binary_search(c.sub_verts.begin(), c.sub_verts.end(), w)) nb.push_back(w);
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      c.nbrs = std::move(nb);
    }
  }
  return ch;
}

/// Structural guarantees of a coarse hierarchy. Throws on failure.
/// `hitting` asserts the neighbor-set size bound, valid when the partition
/// satisfies the large-neighbor-set hitting guarantee for this color.
inline void check_coarse_hierarchy(const Graph& g, const CoarseHierarchy& ch, int f,
                                   bool hitting) {
  auto fail = [](const char* what) { throw ConstructionError(std::string("coarse: ") + what); };
  const int n = static_cast<int>(ch.region.size());
  const double dbound = 3.0 * log2n(n);
  std::vector<int> seen(g.n(), 0);
  for (size_t ki = 0; ki < ch.comps.size(); ++ki) {
    const auto& c = ch.comps[ki];
    for (Vertex v : c.members) ++seen[v];
    if (c.root != c.members.front()) fail("root is not the smallest member");
    // T(K): spanning tree of exactly K.
    UnionFind uf(g.n());
    std::vector<int> deg(g.n(), 0);
    for (const Edge& e : c.tree) {
      if (!g.has_edge(e.u, e.v)) fail("tree edge not in G");
      if (ch.comp_of[e.u] != static_cast<int>(ki) || ch.comp_of[e.v] != static_cast<int>(ki))
        fail("Steiner point in spanning tree");
      if (!uf.unite(e.u, e.v)) fail("cycle in spanning tree");
      ++deg[e.u], ++deg[e.v];
    }
    for (Vertex v : c.members)
      if (uf.find(v) != uf.find(c.root)) fail("spanning tree disconnected");
    for (Vertex v : c.members)
      if (!ch.in_s[v] && static_cast<double>(deg[v]) > dbound + 1e-9)
        fail("non-S vertex degree exceeds 3 log n");
    // N(H_K) in strict ancestors.
    for (Vertex u : c.nbrs)
      if (!ch.is_strict_ancestor(ch.comp_of[u], static_cast<int>(ki)))
        fail("neighbor set vertex not in strict ancestor");
    // Induced subgraph on V(H_K) connected.
    {
      std::vector<char> in_sub(g.n(), 0);
      for (Vertex v : c.sub_verts) in_sub[v] = 1;
      std::vector<Vertex> stack{c.sub_verts.front()};
      std::vector<char> vis(g.n(), 0);
      vis[c.sub_verts.front()] = 1;
      size_t cnt = 1;
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (Vertex w : g.neighbors(x))
          if (in_sub[w] && !vis[w]) {
            vis[w] = 1;
            ++cnt;
            stack.push_back(w);
          }
      }
      if (cnt != c.sub_verts.size()) fail("V(H_K) induced subgraph disconnected");
    }
    // Parent has an edge into this subtree.
    if (c.parent != -1) {
      bool found = false;
      for (Vertex v : ch.comps[c.parent].members) {
        for (Vertex w : g.neighbors(v))
          if (std::binary_search(c.sub_verts.begin(), c.sub_verts.end(), w)) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (!found) fail("no edge from parent into child subtree");
    }
    if (hitting) {
      double nbound = 3.0 * (f + 1) * std::log(static_cast<double>(std::max(2, n))) +
                      f * log2n(n);
      if (static_cast<double>(c.nbrs.size()) >= nbound)
        fail("neighbor set too large under hitting partition");
    }
  }
  for (Vertex v : ch.region)
    if (seen[v] != 1) fail("components do not partition the region");
}

}  // namespace ftcl

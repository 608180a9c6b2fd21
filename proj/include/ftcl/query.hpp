#pragma once

// Connectivity queries from labels alone.  Given the labels of s, t, and the
// fault set F, the engine picks a color class disjoint from F, rebuilds the
// initial partition of the affected components' trees minus F, initializes
// cut sketches from label contents, and runs Boruvka rounds driven by
// sketch decoding.  No access to the graph or the build artifacts is needed.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ftcl/errors.hpp"
#include "ftcl/labeling.hpp"
#include "ftcl/sketch.hpp"

namespace ftcl {

namespace detail {

/// One part Q of the evolving partition, in ancestry representation
/// (invariant I1): root anc plus the ancs of the ending faults.
struct Part {
  AncLabel root;
  std::vector<AncLabel> ending;
  Sketch sk;  // sketch_F*(Q) (invariant I2); moved to the union-find root

  bool contains(const AncLabel& a) const {
    if (!tree_ancestor(root, a)) return false;
    for (const AncLabel& x : ending)
      if (tree_ancestor(x, a)) return false;
    return true;
  }
};

inline void check_same_build(const Seeds& a, const Seeds& b) {
  if (a.n != b.n || a.f != b.f || a.p != b.p || a.omega != b.omega ||
      a.s_id != b.s_id || a.s_hash != b.s_hash)
    throw InvalidQuery("query: labels come from different builds");
}

}  // namespace detail

/// Decide whether s and t are connected in G - F, from labels only.
/// Throws InvalidQuery if s or t is faulted, |F| exceeds f, or the labels
/// are inconsistent with each other.
inline bool labels_connected(const FinalLabel& ls, const FinalLabel& lt,
                             const std::vector<FinalLabel>& lf) {
  if (ls.hiers.empty() || lt.hiers.empty())
    throw InvalidQuery("query: malformed label");
  const int f = ls.hiers[0].seeds.f;

  // Deduplicate faults by vertex id; reject faulted query endpoints.
  std::vector<const FinalLabel*> faults;
  {
    std::set<std::uint32_t> seen;
    for (const FinalLabel& l : lf)
      if (seen.insert(l.id).second) faults.push_back(&l);
  }
  for (const FinalLabel* x : faults)
    if (x->id == ls.id || x->id == lt.id)
      throw InvalidQuery("query: s or t is in the fault set");
  if (static_cast<int>(faults.size()) > f)
    throw InvalidQuery("query: more faults than the scheme supports");
  if (ls.id == lt.id) return true;
  if (ls.gcomp != lt.gcomp) return false;

  // Color selection: the smallest color no fault carries.
  int color = 0;
  {
    std::vector<char> used(static_cast<std::size_t>(f + 2), 0);
    for (const FinalLabel* x : faults)
      if (x->color >= 1 && x->color <= f + 1)
        used[static_cast<std::size_t>(x->color)] = 1;
    for (int i = 1; i <= f + 1 && !color; ++i)
      if (!used[static_cast<std::size_t>(i)]) color = i;
  }
  auto hier_of = [&](const FinalLabel& l) -> const VertexHierLabel& {
    if (static_cast<int>(l.hiers.size()) < color)
      throw InvalidQuery("query: label missing hierarchy for chosen color");
    return l.hiers[static_cast<std::size_t>(color - 1)];
  };
  const VertexHierLabel& hs = hier_of(ls);
  const VertexHierLabel& ht = hier_of(lt);
  const Seeds& sd = hs.seeds;
  detail::check_same_build(sd, ht.seeds);
  for (const FinalLabel* x : faults) detail::check_same_build(sd, hier_of(*x).seeds);

  // Affected components: the union of all ancestor chains.
  std::map<std::uint32_t, const ComponentLabel*> affected;
  auto absorb = [&](const VertexHierLabel& h) {
    for (const auto& cl : h.ancestors) affected.try_emplace(cl->id, cl.get());
  };
  absorb(hs);
  absorb(ht);
  for (const FinalLabel* x : faults) absorb(hier_of(*x));

  VertexSet fault_ids;
  {
    std::vector<Vertex> ids;
    for (const FinalLabel* x : faults) ids.push_back(static_cast<Vertex>(x->id));
    fault_ids = VertexSet(ids);
  }
  auto is_fault_anc = [&](const AncLabel& a) {
    for (const FinalLabel* x : faults)
      if (same_vertex(hier_of(*x).anc, a)) return true;
    return false;
  };

  // ---- Initial partition P0: components of T(K) - F over affected K. ----
  std::vector<detail::Part> parts;
  for (const auto& [kid, cl] : affected) {
    // Faults living in this component.
    std::vector<const VertexHierLabel*> in_k;
    for (const FinalLabel* x : faults) {
      const VertexHierLabel& hx = hier_of(*x);
      if (same_comp(hx.anc, cl->anc)) {
        if (hx.in_s)
          throw InvalidQuery("query: fault colored with the chosen class");
        in_k.push_back(&hx);
      }
    }
    // Rooting vertices with their subtree sketches.
    std::vector<std::pair<AncLabel, const PackedSketch*>> roots;
    if (!is_fault_anc(cl->anc)) roots.emplace_back(cl->anc, &cl->sketch_up);
    for (const VertexHierLabel* hx : in_k)
      for (const ChildEntry& ce : hx->children)
        if (!is_fault_anc(ce.anc)) roots.emplace_back(ce.anc, &ce.sub_up);

    for (auto& [ranc, rsk] : roots) {
      detail::Part p;
      p.root = ranc;
      p.sk = unpack_sketch(sd, *rsk);
      // Ending faults: faults under r_Q with no strict fault ancestor there.
      for (const VertexHierLabel* hx : in_k) {
        if (!tree_ancestor(ranc, hx->anc) || same_vertex(ranc, hx->anc)) continue;
        bool shadowed = false;
        for (const VertexHierLabel* hy : in_k)
          if (hy != hx && tree_ancestor(ranc, hy->anc) &&
              tree_ancestor(hy->anc, hx->anc) && !same_vertex(hy->anc, hx->anc))
            shadowed = true;
        if (shadowed) continue;
        p.ending.push_back(hx->anc);
        p.sk = merge(p.sk, unpack_sketch(sd, hx->sub_up));
      }
      parts.push_back(std::move(p));
    }
  }

  auto find_part = [&](const AncLabel& a) -> int {
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parts[i].contains(a)) return static_cast<int>(i);
    return -1;
  };

  // Add the boundary-vertex sketches of every affected component.
  for (const auto& [kid, cl] : affected)
    for (const NbrEntry& ne : cl->nbrs) {
      int pi = find_part(ne.anc);
      if (pi >= 0) parts[static_cast<std::size_t>(pi)].sk =
          merge(parts[static_cast<std::size_t>(pi)].sk, unpack_sketch(sd, ne.sk));
    }

  // sketch(E*(F -> Q)): single-edge sketches from the faults' out-edges.
  for (const FinalLabel* x : faults)
    for (const Eid& e : hier_of(*x).out_eids) {
      if (e.type != static_cast<std::uint32_t>(sd.n) + 1 &&
          affected.count(e.type - 1))
        continue;  // typed edge of an affected component: not in E*
      if (e.head == 0 || fault_ids.contains(static_cast<Vertex>(e.head - 1)))
        continue;
      int pi = find_part(e.anc_head);
      if (pi >= 0) parts[static_cast<std::size_t>(pi)].sk =
          merge(parts[static_cast<std::size_t>(pi)].sk, sketch_of_single(sd, e));
    }

  // ---- Boruvka rounds. ----
  UnionFind uf(static_cast<int>(parts.size()));
  std::vector<int> sk_at(parts.size());  // part index holding the root sketch
  for (std::size_t i = 0; i < parts.size(); ++i) sk_at[i] = static_cast<int>(i);

  int ps = find_part(hs.anc);
  int pt = find_part(ht.anc);
  if (ps < 0 || pt < 0)
    throw InvalidQuery("query: endpoint not covered by the initial partition");

  int live = static_cast<int>(parts.size());
  for (int q = 0; q < sd.p && live > 1 && uf.find(ps) != uf.find(pt); ++q) {
    std::vector<std::pair<int, int>> links;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (uf.find(static_cast<int>(i)) != static_cast<int>(i)) continue;
      const Sketch& sk = parts[static_cast<std::size_t>(sk_at[i])].sk;
      auto eid = get_edge(sd, sk, q, fault_ids);
      if (!eid) continue;
      int pa = find_part(eid->anc_tail);
      int pb = find_part(eid->anc_head);
      if (pa < 0 || pb < 0) continue;  // endpoint outside V(G*): stale decode
      links.emplace_back(pa, pb);
    }
    for (auto [pa, pb] : links) {
      int ra = uf.find(pa), rb = uf.find(pb);
      if (ra == rb) continue;
      uf.unite(ra, rb);
      --live;
      int r = uf.find(ra);
      int other = r == ra ? rb : ra;
      parts[static_cast<std::size_t>(sk_at[r])].sk =
          merge(parts[static_cast<std::size_t>(sk_at[r])].sk,
                parts[static_cast<std::size_t>(sk_at[other])].sk);
    }
  }

  return uf.find(ps) == uf.find(pt);
}

}  // namespace ftcl

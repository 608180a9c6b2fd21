#pragma once

// Label assembly and serialization.  Per color class S_i the build produces a
// coarse hierarchy, a sparsified oriented auxiliary graph, and sketches; a
// component label stores the component's identity, ancestry, cut sketch, and
// one entry per boundary vertex; a vertex label stores the component labels
// of all ancestors plus (for non-S vertices) subtree cut sketches and the
// identifiers of its oriented out-edges.  The final label of a vertex is the
// concatenation over the f+1 colors, bit-packed with exact accounting.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ftcl/auxgraph.hpp"
#include "ftcl/bits.hpp"
#include "ftcl/coarsen.hpp"
#include "ftcl/errors.hpp"
#include "ftcl/graph.hpp"
#include "ftcl/partition.hpp"
#include "ftcl/sketch.hpp"

namespace ftcl {

// ----------------------------------------------------------- packed sketch

/// Sparse representation of a sketch: the nonzero cells only, sorted by flat
/// cell index.  XOR-mergeable; converts to and from the dense form.
struct PackedSketch {
  std::vector<std::pair<std::int32_t, Eid>> cells;

  friend bool operator==(const PackedSketch&, const PackedSketch&) = default;
};

inline PackedSketch pack_sketch(const Sketch& sk) {
  PackedSketch p;
  for (std::size_t i = 0; i < sk.cells.size(); ++i)
    if (!sk.cells[i].is_zero())
      p.cells.emplace_back(static_cast<std::int32_t>(i), sk.cells[i]);
  return p;
}

inline Sketch unpack_sketch(const Seeds& s, const PackedSketch& p) {
  Sketch sk = empty_sketch(s);
  for (const auto& [idx, eid] : p.cells) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= sk.cells.size())
      throw ParseError("packed sketch: cell index out of range");
    sk.cells[static_cast<std::size_t>(idx)] = eid;
  }
  return sk;
}

// ------------------------------------------------------------ label shapes

struct NbrEntry {
  std::uint32_t id = 0;  // vertex id of u in N(H_K)
  AncLabel anc;
  PackedSketch sk;  // sketch(E(u,K) xor E_K(u))

  friend bool operator==(const NbrEntry&, const NbrEntry&) = default;
};

struct ComponentLabel {
  std::uint32_t id = 0;  // component id
  AncLabel anc;          // anc(r_K)
  PackedSketch sketch_up;
  std::vector<NbrEntry> nbrs;

  friend bool operator==(const ComponentLabel&, const ComponentLabel&) = default;
};

struct ChildEntry {
  std::uint32_t id = 0;
  AncLabel anc;
  PackedSketch sub_up;  // sketch_up(T_u(K_v))

  friend bool operator==(const ChildEntry&, const ChildEntry&) = default;
};

/// The per-hierarchy part L_{H(S_i)}(v).  Component labels are shared
/// between vertex labels in memory; serialization embeds full copies so each
/// label is self-contained.
struct VertexHierLabel {
  Seeds seeds;
  std::uint32_t id = 0;
  AncLabel anc;
  bool in_s = false;
  std::vector<std::shared_ptr<const ComponentLabel>> ancestors;  // K_v up to root
  PackedSketch sub_up;              // sketch_up(T_v(K_v)), only if !in_s
  std::vector<ChildEntry> children;  // T(K_v) children, only if !in_s
  std::vector<Eid> out_eids;         // sparsified edges oriented v -> u

  friend bool operator==(const VertexHierLabel& a, const VertexHierLabel& b) {
    auto key = [](const VertexHierLabel& x) {
      return std::tie(x.seeds.n, x.seeds.f, x.seeds.c, x.seeds.p, x.seeds.omega,
                      x.seeds.s_id, x.seeds.s_hash, x.id, x.anc, x.in_s, x.sub_up,
                      x.children, x.out_eids);
    };
    if (key(a) != key(b) || a.ancestors.size() != b.ancestors.size()) return false;
    for (std::size_t i = 0; i < a.ancestors.size(); ++i)
      if (!(*a.ancestors[i] == *b.ancestors[i])) return false;
    return true;
  }
};

struct FinalLabel {
  std::uint32_t id = 0;
  int color = 1;             // phi(v)
  std::uint32_t gcomp = 0;   // id of v's connected component in G (min member)
  std::vector<VertexHierLabel> hiers;  // one per color 1..f+1
  std::uint64_t bit_length = 0;        // filled by serialization

  friend bool operator==(const FinalLabel& a, const FinalLabel& b) {
    return a.id == b.id && a.color == b.color && a.gcomp == b.gcomp &&
           a.hiers == b.hiers;
  }
};

// ------------------------------------------------------------------- build

struct BuildConfig {
  int f = 1;
  std::uint64_t seed = 0;
  int c = 8;         // sketch round constant
  int c_sparse = 4;  // sparsification round constant
};

/// Per-color build artifacts, retained for reference tests and benchmarks.
struct ColorArtifacts {
  CoarseHierarchy ch;
  AuxGraph sparse;  // sparsified, oriented
  Seeds seeds;
  std::vector<AncLabel> lab;
};

struct BuildStats {
  int levels_max = 0;
  int max_tunion_deg = 0;
  int max_tree_deg_non_s = 0;
  std::size_t max_boundary = 0;
  int max_outdeg = 0;
};

struct LabelBuild {
  std::vector<FinalLabel> labels;      // indexed by vertex
  std::vector<ColorArtifacts> colors;  // indexed by color-1
  ColorPartition part;
  BuildStats stats;
};

/// Combine the per-G-component coarse hierarchies of one color into a single
/// forest over all of V(G).
inline CoarseHierarchy merge_coarse(const std::vector<CoarseHierarchy>& parts, int n) {
  CoarseHierarchy out;
  out.comp_of.assign(static_cast<std::size_t>(n), -1);
  out.in_s.assign(static_cast<std::size_t>(n), 0);
  for (const CoarseHierarchy& p : parts) {
    int base = static_cast<int>(out.comps.size());
    for (CoarseComp c : p.comps) {
      if (c.parent != -1) c.parent += base;
      for (int& ch : c.children) ch += base;
      out.comps.push_back(std::move(c));
    }
    for (Vertex v : p.region) {
      out.region.push_back(v);
      out.comp_of[static_cast<std::size_t>(v)] =
          p.comp_of[static_cast<std::size_t>(v)] + base;
      out.in_s[static_cast<std::size_t>(v)] = p.in_s[static_cast<std::size_t>(v)];
    }
  }
  std::sort(out.region.begin(), out.region.end());
  return out;
}

namespace detail {

/// Indices into sparse.edges incident to each vertex (either endpoint).
inline std::vector<std::vector<int>> incidence(const AuxGraph& sparse) {
  std::vector<std::vector<int>> inc(static_cast<std::size_t>(sparse.n));
  for (std::size_t i = 0; i < sparse.edges.size(); ++i) {
    inc[static_cast<std::size_t>(sparse.edges[i].u)].push_back(static_cast<int>(i));
    inc[static_cast<std::size_t>(sparse.edges[i].v)].push_back(static_cast<int>(i));
  }
  return inc;
}

/// E_up(v) over the sparsified graph: incident edges whose other endpoint's
/// component is a (weak) ancestor of K_v.
inline std::vector<TypedEdge> up_edges(const AuxGraph& sparse, const CoarseHierarchy& ch,
                                       const std::vector<std::vector<int>>& inc,
                                       Vertex v) {
  std::vector<TypedEdge> out;
  int kv = ch.comp_of[static_cast<std::size_t>(v)];
  for (int ei : inc[static_cast<std::size_t>(v)]) {
    const TypedEdge& e = sparse.edges[static_cast<std::size_t>(ei)];
    Vertex w = e.u == v ? e.v : e.u;
    int kw = ch.comp_of[static_cast<std::size_t>(w)];
    if (kw != -1 && ch.is_ancestor(kw, kv)) out.push_back(e);
  }
  return out;
}

}  // namespace detail

inline LabelBuild build_labels(const Graph& g, const BuildConfig& cfg) {
  if (cfg.f < 1) throw InvalidQuery("build: f must be >= 1");
  const int n = g.n();
  if (n < 1) throw InvalidQuery("build: empty graph");
  LabelBuild out;

  // Graph components and their base hierarchies (color-independent).
  auto cc = connected_components(g);
  std::vector<std::vector<Vertex>> regions;
  {
    std::map<int, int> idx;
    for (Vertex v = 0; v < n; ++v) {
      auto [it, fresh] = idx.try_emplace(cc[static_cast<std::size_t>(v)],
                                         static_cast<int>(regions.size()));
      if (fresh) regions.emplace_back();
      regions[static_cast<std::size_t>(it->second)].push_back(v);
    }
  }
  std::vector<std::uint32_t> gcomp(static_cast<std::size_t>(n));
  for (const auto& r : regions)
    for (Vertex v : r) gcomp[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(r[0]);

  std::vector<BaseHierarchy> hs;
  for (std::size_t i = 0; i < regions.size(); ++i)
    hs.push_back(build_base_hierarchy(g, regions[i], 4, mix64(cfg.seed) + i));
  for (const auto& h : hs) {
    out.stats.levels_max = std::max(out.stats.levels_max, h.levels);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const Edge& e : h.t_union) {
      ++deg[static_cast<std::size_t>(e.u)];
      ++deg[static_cast<std::size_t>(e.v)];
    }
    for (int d : deg) out.stats.max_tunion_deg = std::max(out.stats.max_tunion_deg, d);
  }

  out.part = derandomized_partition(hs, n, cfg.f);

  out.labels.assign(static_cast<std::size_t>(n), FinalLabel{});
  for (Vertex v = 0; v < n; ++v) {
    out.labels[static_cast<std::size_t>(v)].id = static_cast<std::uint32_t>(v);
    out.labels[static_cast<std::size_t>(v)].color =
        out.part.color[static_cast<std::size_t>(v)];
    out.labels[static_cast<std::size_t>(v)].gcomp = gcomp[static_cast<std::size_t>(v)];
  }

  for (int color = 1; color <= cfg.f + 1; ++color) {
    ColorArtifacts art;
    {
      std::vector<CoarseHierarchy> pieces;
      for (std::size_t i = 0; i < hs.size(); ++i)
        pieces.push_back(coarsen(g, hs[i], out.part, color));
      art.ch = merge_coarse(pieces, n);
    }
    AuxGraph full = build_aux_graph(g, art.ch);
    art.sparse = sparsify_orient(full, cfg.f, mix64(cfg.seed ^ 0x0515ULL) + color,
                                 cfg.c_sparse);
    art.seeds = make_seeds(n, cfg.f, mix64(cfg.seed ^ 0x5eed5ULL) + color, cfg.c);
    art.lab = anc_labels(art.ch, n);
    out.stats.max_outdeg = std::max(out.stats.max_outdeg, art.sparse.max_outdeg);

    const CoarseHierarchy& ch = art.ch;
    const Seeds& sd = art.seeds;
    auto inc = detail::incidence(art.sparse);

    // Component labels (with the subtree sketches as a byproduct of the
    // tree DP), then the per-vertex labels.
    std::vector<std::shared_ptr<const ComponentLabel>> clabels(ch.comps.size());
    std::vector<PackedSketch> sub_up(static_cast<std::size_t>(n));
    std::vector<std::vector<Vertex>> tree_children(static_cast<std::size_t>(n));

    for (std::size_t k = 0; k < ch.comps.size(); ++k) {
      const CoarseComp& comp = ch.comps[k];
      // Root T(K) at r_K, order members by BFS, record children.
      std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
      for (const Edge& e : comp.tree) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
      }
      std::vector<Vertex> order{comp.root};
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      seen[static_cast<std::size_t>(comp.root)] = 1;
      for (std::size_t i = 0; i < order.size(); ++i)
        for (Vertex w : adj[static_cast<std::size_t>(order[i])])
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            tree_children[static_cast<std::size_t>(order[i])].push_back(w);
            order.push_back(w);
          }
      // Bottom-up: sketch_up(T_v) = sketch(E_up(v)) xor children's values.
      std::map<Vertex, Sketch> dp;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Vertex v = *it;
        Sketch s = sketch_of(sd, detail::up_edges(art.sparse, ch, inc, v), art.lab);
        int deg_t = static_cast<int>(adj[static_cast<std::size_t>(v)].size());
        if (!ch.in_s[static_cast<std::size_t>(v)])
          out.stats.max_tree_deg_non_s = std::max(out.stats.max_tree_deg_non_s, deg_t);
        for (Vertex u : tree_children[static_cast<std::size_t>(v)])
          s = merge(s, dp.at(u));
        sub_up[static_cast<std::size_t>(v)] = pack_sketch(s);
        dp.emplace(v, std::move(s));
        for (Vertex u : tree_children[static_cast<std::size_t>(v)]) dp.erase(u);
      }

      auto cl = std::make_shared<ComponentLabel>();
      cl->id = static_cast<std::uint32_t>(k);
      cl->anc = art.lab[static_cast<std::size_t>(comp.root)];
      cl->sketch_up = sub_up[static_cast<std::size_t>(comp.root)];
      out.stats.max_boundary = std::max(out.stats.max_boundary, comp.nbrs.size());
      for (Vertex u : comp.nbrs) {
        NbrEntry ne;
        ne.id = static_cast<std::uint32_t>(u);
        ne.anc = art.lab[static_cast<std::size_t>(u)];
        std::vector<TypedEdge> set;  // E(u,K) and E_K(u) are disjoint
        for (int ei : inc[static_cast<std::size_t>(u)]) {
          const TypedEdge& e = art.sparse.edges[static_cast<std::size_t>(ei)];
          Vertex w = e.u == u ? e.v : e.u;
          bool host = ch.comp_of[static_cast<std::size_t>(w)] == static_cast<int>(k);
          bool typed = e.type == static_cast<int>(k);
          if (host != typed)
            set.push_back(e);
          // host && typed cannot happen: type-K endpoints avoid K itself.
        }
        ne.sk = pack_sketch(sketch_of(sd, set, art.lab));
        cl->nbrs.push_back(std::move(ne));
      }
      clabels[k] = std::move(cl);
    }

    for (Vertex v = 0; v < n; ++v) {
      VertexHierLabel hl;
      hl.seeds = sd;
      hl.id = static_cast<std::uint32_t>(v);
      hl.anc = art.lab[static_cast<std::size_t>(v)];
      hl.in_s = ch.in_s[static_cast<std::size_t>(v)] != 0;
      for (int k = ch.comp_of[static_cast<std::size_t>(v)]; k != -1;
           k = ch.comps[static_cast<std::size_t>(k)].parent)
        hl.ancestors.push_back(clabels[static_cast<std::size_t>(k)]);
      if (!hl.in_s) {
        hl.sub_up = sub_up[static_cast<std::size_t>(v)];
        for (Vertex u : tree_children[static_cast<std::size_t>(v)]) {
          ChildEntry ce;
          ce.id = static_cast<std::uint32_t>(u);
          ce.anc = art.lab[static_cast<std::size_t>(u)];
          ce.sub_up = sub_up[static_cast<std::size_t>(u)];
          hl.children.push_back(std::move(ce));
        }
        for (int ei : art.sparse.out[static_cast<std::size_t>(v)])
          hl.out_eids.push_back(
              make_eid(sd, art.sparse.edges[static_cast<std::size_t>(ei)], art.lab));
      }
      out.labels[static_cast<std::size_t>(v)].hiers.push_back(std::move(hl));
    }
    out.colors.push_back(std::move(art));
  }
  return out;
}

// ----------------------------------------------------------- serialization

/// Bit widths used by the packed label format, all derived from the header.
struct LabelWidths {
  int idw = 1;    // vertex / component ids
  int ancw = 1;   // DFS time stamps (up to 2n)
  int typew = 1;  // eid type field (up to n+1)
  int cellw = 1;  // flat sketch cell index
  int eidw = 0;   // total eid width

  static LabelWidths from(const Seeds& s) {
    LabelWidths w;
    auto bits_for = [](long long hi) {
      int b = 1;
      while ((1ll << b) <= hi) ++b;
      return b;
    };
    w.idw = bits_for(s.n);
    w.ancw = bits_for(2ll * s.n + 1);
    w.typew = bits_for(s.n + 1);
    w.cellw = bits_for(static_cast<long long>(s.p) * s.f * (s.omega + 1));
    w.eidw = 64 + 2 * w.idw + w.typew + 8 * w.ancw;
    return w;
  }
};

/// Per-field-class bit accounting of one serialized label.
struct LabelBreakdown {
  std::uint64_t header_bits = 0;    // ids, ancs, seeds, color, flags
  std::uint64_t comp_bits = 0;      // component labels
  std::uint64_t subtree_bits = 0;   // sub_up + child entries
  std::uint64_t out_bits = 0;       // out-edge eids
  std::uint64_t total() const {
    return header_bits + comp_bits + subtree_bits + out_bits;
  }
};

namespace detail {

inline void put_anc(BitWriter& bw, const LabelWidths& w, const AncLabel& a) {
  bw.put(a.hpre, w.ancw);
  bw.put(a.hpost, w.ancw);
  bw.put(a.tpre, w.ancw);
  bw.put(a.tpost, w.ancw);
}
inline AncLabel get_anc(BitReader& br, const LabelWidths& w) {
  AncLabel a;
  a.hpre = static_cast<std::uint32_t>(br.get(w.ancw));
  a.hpost = static_cast<std::uint32_t>(br.get(w.ancw));
  a.tpre = static_cast<std::uint32_t>(br.get(w.ancw));
  a.tpost = static_cast<std::uint32_t>(br.get(w.ancw));
  return a;
}
inline void put_eid(BitWriter& bw, const LabelWidths& w, const Eid& e) {
  bw.put(e.uid, 64);
  bw.put(e.tail, w.idw);
  bw.put(e.head, w.idw);
  bw.put(e.type, w.typew);
  put_anc(bw, w, e.anc_tail);
  put_anc(bw, w, e.anc_head);
}
inline Eid get_eid(BitReader& br, const LabelWidths& w) {
  Eid e;
  e.uid = br.get(64);
  e.tail = static_cast<std::uint32_t>(br.get(w.idw));
  e.head = static_cast<std::uint32_t>(br.get(w.idw));
  e.type = static_cast<std::uint32_t>(br.get(w.typew));
  e.anc_tail = get_anc(br, w);
  e.anc_head = get_anc(br, w);
  return e;
}

inline void put_sketch(BitWriter& bw, const Seeds& s, const LabelWidths& w,
                       const PackedSketch& p) {
  std::size_t ncells = static_cast<std::size_t>(s.p) * s.f * (s.omega + 1);
  std::uint64_t sparse_bits =
      static_cast<std::uint64_t>(p.cells.size()) * (w.cellw + w.eidw);
  std::uint64_t dense_bits = static_cast<std::uint64_t>(ncells) * w.eidw;
  bool dense = dense_bits < sparse_bits;
  bw.put(dense, 1);
  if (dense) {
    std::size_t at = 0;
    for (std::size_t i = 0; i < ncells; ++i) {
      Eid e;
      if (at < p.cells.size() && p.cells[at].first == static_cast<std::int32_t>(i))
        e = p.cells[at++].second;
      put_eid(bw, w, e);
    }
  } else {
    bw.put(p.cells.size(), w.cellw + 1);
    for (const auto& [idx, e] : p.cells) {
      bw.put(static_cast<std::uint64_t>(idx), w.cellw);
      put_eid(bw, w, e);
    }
  }
}
inline PackedSketch get_sketch(BitReader& br, const Seeds& s, const LabelWidths& w) {
  PackedSketch p;
  std::size_t ncells = static_cast<std::size_t>(s.p) * s.f * (s.omega + 1);
  if (br.get(1)) {
    for (std::size_t i = 0; i < ncells; ++i) {
      Eid e = get_eid(br, w);
      if (!e.is_zero()) p.cells.emplace_back(static_cast<std::int32_t>(i), e);
    }
  } else {
    std::uint64_t cnt = br.get(w.cellw + 1);
    for (std::uint64_t i = 0; i < cnt; ++i) {
      auto idx = static_cast<std::int32_t>(br.get(w.cellw));
      p.cells.emplace_back(idx, get_eid(br, w));
    }
  }
  return p;
}

}  // namespace detail

inline constexpr std::uint32_t kLabelMagic = 0x4c435446u;  // "FTCL" little-endian
inline constexpr std::uint16_t kLabelVersion = 1;

/// Serialize one label to a self-describing bitstream; fills the breakdown
/// and the label's bit_length.
inline std::vector<std::uint8_t> serialize_label(FinalLabel& l, LabelBreakdown* bd = nullptr) {
  if (l.hiers.empty()) throw InvalidQuery("serialize: label has no hierarchies");
  const Seeds& s0 = l.hiers[0].seeds;
  LabelWidths w = LabelWidths::from(s0);
  LabelBreakdown acc;
  BitWriter bw;
  // Self-describing header.
  bw.put(kLabelMagic, 32);
  bw.put(kLabelVersion, 16);
  bw.put(static_cast<std::uint64_t>(s0.n), 32);
  bw.put(static_cast<std::uint64_t>(s0.f), 16);
  bw.put(static_cast<std::uint64_t>(s0.c), 16);
  bw.put(static_cast<std::uint64_t>(s0.p), 32);
  bw.put(static_cast<std::uint64_t>(s0.omega), 16);
  bw.put(l.id, w.idw);
  bw.put(static_cast<std::uint64_t>(l.color), 16);
  bw.put(l.gcomp, w.idw);
  acc.header_bits += bw.bit_size();

  for (const VertexHierLabel& h : l.hiers) {
    std::uint64_t mark = bw.bit_size();
    bw.put(h.seeds.s_id, 64);
    bw.put(h.seeds.s_hash, 64);
    bw.put(h.id, w.idw);
    detail::put_anc(bw, w, h.anc);
    bw.put(h.in_s, 1);
    acc.header_bits += bw.bit_size() - mark;

    mark = bw.bit_size();
    bw.put(h.ancestors.size(), 16);
    for (const auto& cl : h.ancestors) {
      bw.put(cl->id, w.idw);
      detail::put_anc(bw, w, cl->anc);
      detail::put_sketch(bw, h.seeds, w, cl->sketch_up);
      bw.put(cl->nbrs.size(), 32);
      for (const NbrEntry& ne : cl->nbrs) {
        bw.put(ne.id, w.idw);
        detail::put_anc(bw, w, ne.anc);
        detail::put_sketch(bw, h.seeds, w, ne.sk);
      }
    }
    acc.comp_bits += bw.bit_size() - mark;

    if (!h.in_s) {
      mark = bw.bit_size();
      detail::put_sketch(bw, h.seeds, w, h.sub_up);
      bw.put(h.children.size(), 16);
      for (const ChildEntry& ce : h.children) {
        bw.put(ce.id, w.idw);
        detail::put_anc(bw, w, ce.anc);
        detail::put_sketch(bw, h.seeds, w, ce.sub_up);
      }
      acc.subtree_bits += bw.bit_size() - mark;

      mark = bw.bit_size();
      bw.put(h.out_eids.size(), 32);
      for (const Eid& e : h.out_eids) detail::put_eid(bw, w, e);
      acc.out_bits += bw.bit_size() - mark;
    }
  }
  l.bit_length = bw.bit_size();
  if (bd) *bd = acc;
  return bw.bytes();
}

inline FinalLabel deserialize_label(const std::uint8_t* data, std::size_t nbytes) {
  BitReader br(data, nbytes);
  if (br.get(32) != kLabelMagic) throw ParseError("label: bad magic");
  if (br.get(16) != kLabelVersion) throw ParseError("label: unsupported version");
  Seeds base;
  base.n = static_cast<int>(br.get(32));
  base.f = static_cast<int>(br.get(16));
  base.c = static_cast<int>(br.get(16));
  base.p = static_cast<int>(br.get(32));
  base.omega = static_cast<int>(br.get(16));
  if (base.n < 1 || base.f < 1 || base.p < 1 || base.omega < 1)
    throw ParseError("label: invalid header");
  LabelWidths w = LabelWidths::from(base);

  FinalLabel l;
  l.id = static_cast<std::uint32_t>(br.get(w.idw));
  l.color = static_cast<int>(br.get(16));
  l.gcomp = static_cast<std::uint32_t>(br.get(w.idw));
  for (int i = 0; i <= base.f; ++i) {
    VertexHierLabel h;
    h.seeds = base;
    h.seeds.s_id = br.get(64);
    h.seeds.s_hash = br.get(64);
    h.id = static_cast<std::uint32_t>(br.get(w.idw));
    h.anc = detail::get_anc(br, w);
    h.in_s = br.get(1) != 0;
    std::uint64_t nanc = br.get(16);
    for (std::uint64_t a = 0; a < nanc; ++a) {
      auto cl = std::make_shared<ComponentLabel>();
      cl->id = static_cast<std::uint32_t>(br.get(w.idw));
      cl->anc = detail::get_anc(br, w);
      cl->sketch_up = detail::get_sketch(br, h.seeds, w);
      std::uint64_t nnb = br.get(32);
      for (std::uint64_t b = 0; b < nnb; ++b) {
        NbrEntry ne;
        ne.id = static_cast<std::uint32_t>(br.get(w.idw));
        ne.anc = detail::get_anc(br, w);
        ne.sk = detail::get_sketch(br, h.seeds, w);
        cl->nbrs.push_back(std::move(ne));
      }
      h.ancestors.push_back(std::move(cl));
    }
    if (!h.in_s) {
      h.sub_up = detail::get_sketch(br, h.seeds, w);
      std::uint64_t nch = br.get(16);
      for (std::uint64_t b = 0; b < nch; ++b) {
        ChildEntry ce;
        ce.id = static_cast<std::uint32_t>(br.get(w.idw));
        ce.anc = detail::get_anc(br, w);
        ce.sub_up = detail::get_sketch(br, h.seeds, w);
        h.children.push_back(std::move(ce));
      }
      std::uint64_t nout = br.get(32);
      for (std::uint64_t b = 0; b < nout; ++b)
        h.out_eids.push_back(detail::get_eid(br, w));
    }
    l.hiers.push_back(std::move(h));
  }
  l.bit_length = br.bit_pos();
  return l;
}

// ------------------------------------------------------------- label file

/// File layout: u32 magic, u16 version, u32 n, u32 record count, then per
/// record a u64 byte length followed by the serialized label.
inline void write_label_file(const std::string& path, std::vector<FinalLabel>& labels) {
  std::vector<std::uint8_t> blob;
  auto put32 = [&](std::uint32_t x) {
    for (int i = 0; i < 4; ++i) blob.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  };
  put32(kLabelMagic);
  blob.push_back(kLabelVersion & 0xff);
  blob.push_back(kLabelVersion >> 8);
  put32(static_cast<std::uint32_t>(labels.empty() ? 0 : labels[0].hiers[0].seeds.n));
  put32(static_cast<std::uint32_t>(labels.size()));
  for (FinalLabel& l : labels) {
    auto bytes = serialize_label(l);
    std::uint64_t len = bytes.size();
    for (int i = 0; i < 8; ++i) blob.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    blob.insert(blob.end(), bytes.begin(), bytes.end());
  }
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw ParseError("cannot open label file for writing: " + path);
  bool ok = blob.empty() || std::fwrite(blob.data(), 1, blob.size(), fp) == blob.size();
  std::fclose(fp);
  if (!ok) throw ParseError("short write to label file: " + path);
}

inline std::vector<FinalLabel> read_label_file(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw ParseError("cannot open label file: " + path);
  std::vector<std::uint8_t> blob;
  std::uint8_t buf[65536];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, fp)) > 0) blob.insert(blob.end(), buf, buf + got);
  std::fclose(fp);

  std::size_t at = 0;
  auto need = [&](std::size_t k) {
    if (at + k > blob.size()) throw ParseError("label file truncated: " + path);
  };
  auto get32 = [&]() {
    need(4);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(blob[at++]) << (8 * i);
    return x;
  };
  if (get32() != kLabelMagic) throw ParseError("label file: bad magic");
  need(2);
  std::uint16_t ver = static_cast<std::uint16_t>(blob[at] | (blob[at + 1] << 8));
  at += 2;
  if (ver != kLabelVersion) throw ParseError("label file: unsupported version");
  get32();  // n, informational
  std::uint32_t count = get32();
  std::vector<FinalLabel> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    need(8);
    std::uint64_t len = 0;
    for (int b = 0; b < 8; ++b) len |= static_cast<std::uint64_t>(blob[at++]) << (8 * b);
    need(len);
    out.push_back(deserialize_label(blob.data() + at, len));
    at += len;
  }
  return out;
}

// ------------------------------------------------------------------- stats

struct LabelStats {
  std::size_t count = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t max_bits = 0;
  double mean_bits = 0;
  LabelBreakdown breakdown;  // summed across labels
};

inline LabelStats label_stats(std::vector<FinalLabel>& labels) {
  LabelStats st;
  for (FinalLabel& l : labels) {
    LabelBreakdown bd;
    serialize_label(l, &bd);
    st.count += 1;
    st.total_bits += l.bit_length;
    st.max_bits = std::max(st.max_bits, l.bit_length);
    st.breakdown.header_bits += bd.header_bits;
    st.breakdown.comp_bits += bd.comp_bits;
    st.breakdown.subtree_bits += bd.subtree_bits;
    st.breakdown.out_bits += bd.out_bits;
  }
  if (st.count) st.mean_bits = static_cast<double>(st.total_bits) / st.count;
  return st;
}

}  // namespace ftcl

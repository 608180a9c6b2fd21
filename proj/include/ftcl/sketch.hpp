#pragma once

// Identifier machinery and the linear XOR cut sketch.  Vertices and
// components get ancestry labels (DFS pre/post intervals); every possible
// typed, oriented edge gets a unique identifier (uid, a keyed pseudorandom
// function of the key so that XOR-sums of several uids are not valid uids)
// and an extended identifier (eid) carrying endpoint ids, type, and ancestry.
// A sketch of an edge set is a p x f x (omega+1) array of XOR-accumulated
// eids; Merge is cell-wise XOR and GetEdge scans one round's cells for an
// isolated, fault-free edge.

#include <cstdint>
#include <optional>
#include <vector>

#include "ftcl/auxgraph.hpp"
#include "ftcl/coarsen.hpp"
#include "ftcl/errors.hpp"
#include "ftcl/rng.hpp"

namespace ftcl {

// ---------------------------------------------------------------- ancestry

/// DFS pre/post intervals of K_v in the hierarchy and of v in T(K_v).
struct AncLabel {
  std::uint32_t hpre = 0, hpost = 0;  // component interval in the hierarchy
  std::uint32_t tpre = 0, tpost = 0;  // vertex interval in T(K_v)

  friend bool operator==(const AncLabel&, const AncLabel&) = default;
};

/// K_a is a (weak) ancestor of K_b.
inline bool comp_ancestor(const AncLabel& a, const AncLabel& b) {
  return a.hpre <= b.hpre && b.hpost <= a.hpost;
}
inline bool same_comp(const AncLabel& a, const AncLabel& b) { return a.hpre == b.hpre; }
/// a is a (weak) ancestor of b within their common T(K); only meaningful
/// when same_comp(a, b).
inline bool tree_ancestor(const AncLabel& a, const AncLabel& b) {
  return same_comp(a, b) && a.tpre <= b.tpre && b.tpost <= a.tpost;
}
inline bool same_vertex(const AncLabel& a, const AncLabel& b) {
  return a.hpre == b.hpre && a.tpre == b.tpre;
}

/// Ancestry labels for every vertex of the hierarchy's region.  Vertices
/// outside the region get the all-zero label (hpre = 0 never occurs for real
/// labels; time stamps start at 1).
inline std::vector<AncLabel> anc_labels(const CoarseHierarchy& h, int n) {
  std::vector<AncLabel> lab(static_cast<std::size_t>(n));
  // Component intervals: DFS over the hierarchy forest.
  std::vector<std::uint32_t> cpre(h.comps.size()), cpost(h.comps.size());
  std::uint32_t clock = 0;
  for (std::size_t r = 0; r < h.comps.size(); ++r) {
    if (h.comps[r].parent != -1) continue;
    // Iterative DFS; second visit pops.
    std::vector<std::pair<int, bool>> stack{{static_cast<int>(r), false}};
    while (!stack.empty()) {
      auto [k, done] = stack.back();
      stack.pop_back();
      if (done) {
        cpost[static_cast<std::size_t>(k)] = ++clock;
        continue;
      }
      cpre[static_cast<std::size_t>(k)] = ++clock;
      stack.emplace_back(k, true);
      const auto& ch = h.comps[static_cast<std::size_t>(k)].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(*it, false);
    }
  }
  // Vertex intervals within each T(K), rooted at r_K.
  for (std::size_t k = 0; k < h.comps.size(); ++k) {
    const auto& comp = h.comps[k];
    std::vector<std::vector<Vertex>> adj;
    std::vector<int> index(comp.members.size());
    // Local adjacency over member positions.
    auto pos = [&](Vertex v) {
      return static_cast<std::size_t>(
          std::lower_bound(comp.members.begin(), comp.members.end(), v) -
          comp.members.begin());
    };
    adj.assign(comp.members.size(), {});
    for (const Edge& e : comp.tree) {
      adj[pos(e.u)].push_back(e.v);
      adj[pos(e.v)].push_back(e.u);
    }
    std::uint32_t tclock = 0;
    std::vector<std::pair<Vertex, bool>> stack{{comp.root, false}};
    std::vector<char> seen(comp.members.size(), 0);
    if (!comp.members.empty()) seen[pos(comp.root)] = 1;
    while (!stack.empty()) {
      auto [v, done] = stack.back();
      stack.pop_back();
      auto& l = lab[static_cast<std::size_t>(v)];
      if (done) {
        l.tpost = ++tclock;
        continue;
      }
      l.hpre = cpre[k];
      l.hpost = cpost[k];
      l.tpre = ++tclock;
      stack.emplace_back(v, true);
      for (Vertex w : adj[pos(v)]) {
        if (seen[pos(w)]) continue;
        seen[pos(w)] = 1;
        stack.emplace_back(w, false);
      }
    }
  }
  return lab;
}

/// anc(K) = anc(r_K).
inline AncLabel anc_of_comp(const CoarseHierarchy& h, const std::vector<AncLabel>& lab,
                            int k) {
  return lab[static_cast<std::size_t>(h.comps[static_cast<std::size_t>(k)].root)];
}

// ------------------------------------------------------------------- seeds

/// All sketch parameters plus the two seeds: S_id keys the uid function,
/// S_hash determines every h_{q,i} and phi_{q,i}.
struct Seeds {
  int n = 0;
  int f = 1;
  int c = 8;        // round-count constant, p = ceil(c * log2 n)
  int p = 1;        // Boruvka/sketch rounds
  int omega = 1;    // ceil(log2 |universe of (id,id,type,orientation)|)
  std::uint64_t s_id = 0;
  std::uint64_t s_hash = 0;
};

inline Seeds make_seeds(int n, int f, std::uint64_t seed, int c = 8) {
  if (n < 1 || f < 1 || c < 1) throw InvalidQuery("seeds: n, f, c must be positive");
  Seeds s;
  s.n = n;
  s.f = f;
  s.c = c;
  s.p = std::max(1, static_cast<int>(std::ceil(c * log2n(n))));
  // Keys are ordered (tail, head) pairs with a type from [1, n] plus the
  // original tag: n * n * (n+1) * 2 possibilities.
  double uni = 2.0 * n * static_cast<double>(n) * (n + 1);
  s.omega = std::max(1, static_cast<int>(std::ceil(std::log2(uni))));
  s.s_id = mix64(seed ^ 0x1d5eed1d5eedULL);
  s.s_hash = mix64(seed ^ 0x4a5475eedULL);
  return s;
}

/// Key of a possible edge: tail id, head id (orientation = order), type.
/// type kOriginal maps to the reserved tag n (component ids are 0..n-1).
inline std::uint64_t edge_key64(const Seeds& s, Vertex tail, Vertex head, int type) {
  std::uint64_t t = type == kOriginal ? static_cast<std::uint64_t>(s.n)
                                      : static_cast<std::uint64_t>(type);
  return (static_cast<std::uint64_t>(tail) * static_cast<std::uint64_t>(s.n) +
          static_cast<std::uint64_t>(head)) *
             (static_cast<std::uint64_t>(s.n) + 1) +
         t;
}

/// Keyed pseudorandom 64-bit uid; XOR combinations of two or more uids fail
/// to be valid uids except with probability ~2^-64 per fixed set.
inline std::uint64_t uid_of(const Seeds& s, Vertex tail, Vertex head, int type) {
  std::uint64_t k = edge_key64(s, tail, head, type);
  std::uint64_t x = mix64(k ^ s.s_id);
  return mix64(x + 0x9e3779b97f4a7c15ULL + (k << 1));
}

// ------------------------------------------------------------------- hashes

namespace detail {
inline constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;  // Mersenne

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % kPrime);
}

struct AffineHash {
  std::uint64_t a = 1, b = 0;
  std::uint64_t operator()(std::uint64_t x) const {
    return (mulmod61(a, x % kPrime) + b) % kPrime;
  }
};

/// Deterministic coefficients for the hash of a given kind/round/index.
inline AffineHash hash_for(const Seeds& s, int kind, int q, int i) {
  Rng rng(mix64(s.s_hash ^ (static_cast<std::uint64_t>(kind) << 48 ^
                            static_cast<std::uint64_t>(q) << 24 ^
                            static_cast<std::uint64_t>(i))));
  AffineHash h;
  h.a = rng.below(kPrime - 1) + 1;
  h.b = rng.below(kPrime);
  return h;
}
}  // namespace detail

/// h_{q,i}: V -> [1, 2f]; membership rule is h(v) == 1.
inline bool h_hits(const Seeds& s, int q, int i, Vertex v) {
  auto h = detail::hash_for(s, 0, q, i);
  return h(static_cast<std::uint64_t>(v) + 1) % (2ull * s.f) == 0;
}

/// phi_{q,i}: edge keys -> [0, 2^omega).
inline std::uint64_t phi_of(const Seeds& s, int q, int i, std::uint64_t key) {
  auto h = detail::hash_for(s, 1, q, i);
  return h(key) & ((std::uint64_t{1} << s.omega) - 1);
}

// --------------------------------------------------------------------- eid

/// Extended edge identifier; all fields XOR-accumulate.
struct Eid {
  std::uint64_t uid = 0;
  std::uint32_t tail = 0, head = 0;  // id(u), id(v) for orientation u -> v
  std::uint32_t type = 0;            // component id + 1; 0 reserved, n+1 = original
  AncLabel anc_tail, anc_head;

  friend bool operator==(const Eid&, const Eid&) = default;

  bool is_zero() const { return *this == Eid{}; }

  Eid& operator^=(const Eid& o) {
    uid ^= o.uid;
    tail ^= o.tail;
    head ^= o.head;
    type ^= o.type;
    anc_tail.hpre ^= o.anc_tail.hpre;
    anc_tail.hpost ^= o.anc_tail.hpost;
    anc_tail.tpre ^= o.anc_tail.tpre;
    anc_tail.tpost ^= o.anc_tail.tpost;
    anc_head.hpre ^= o.anc_head.hpre;
    anc_head.hpost ^= o.anc_head.hpost;
    anc_head.tpre ^= o.anc_head.tpre;
    anc_head.tpost ^= o.anc_head.tpost;
    return *this;
  }
  friend Eid operator^(Eid a, const Eid& b) { return a ^= b; }
};

/// Field encodings: ids are v+1 (so the zero Eid is not a valid edge), type
/// is stored as type+1 with original = n+1.
inline Eid make_eid(const Seeds& s, const TypedEdge& e, const std::vector<AncLabel>& lab) {
  Eid id;
  id.uid = uid_of(s, e.u, e.v, e.type);
  id.tail = static_cast<std::uint32_t>(e.u) + 1;
  id.head = static_cast<std::uint32_t>(e.v) + 1;
  id.type = e.type == kOriginal ? static_cast<std::uint32_t>(s.n) + 1
                                : static_cast<std::uint32_t>(e.type) + 1;
  id.anc_tail = lab[static_cast<std::size_t>(e.u)];
  id.anc_head = lab[static_cast<std::size_t>(e.v)];
  return id;
}

/// If x is the XOR of exactly one eid, recover that edge; otherwise
/// not-single (nullopt).  Checks the uid recomputed from the id/type
/// coordinates against the uid coordinate, and basic range sanity.
inline std::optional<TypedEdge> decode_single(const Seeds& s, const Eid& x) {
  if (x.is_zero()) return std::nullopt;
  if (x.tail < 1 || x.tail > static_cast<std::uint32_t>(s.n)) return std::nullopt;
  if (x.head < 1 || x.head > static_cast<std::uint32_t>(s.n)) return std::nullopt;
  if (x.type < 1 || x.type > static_cast<std::uint32_t>(s.n) + 1) return std::nullopt;
  TypedEdge e;
  e.u = static_cast<Vertex>(x.tail) - 1;
  e.v = static_cast<Vertex>(x.head) - 1;
  e.type = x.type == static_cast<std::uint32_t>(s.n) + 1 ? kOriginal
                                                         : static_cast<int>(x.type) - 1;
  if (e.u == e.v) return std::nullopt;
  if (uid_of(s, e.u, e.v, e.type) != x.uid) return std::nullopt;
  return e;
}

// ------------------------------------------------------------------ sketch

struct Sketch {
  int p = 0, f = 0, omega = 0;
  std::vector<Eid> cells;  // (q * f + i) * (omega+1) + j

  Eid& at(int q, int i, int j) {
    return cells[static_cast<std::size_t>((q * f + i) * (omega + 1) + j)];
  }
  const Eid& at(int q, int i, int j) const {
    return cells[static_cast<std::size_t>((q * f + i) * (omega + 1) + j)];
  }
  bool is_zero() const {
    for (const Eid& e : cells)
      if (!e.is_zero()) return false;
    return true;
  }
};

inline Sketch empty_sketch(const Seeds& s) {
  Sketch sk;
  sk.p = s.p;
  sk.f = s.f;
  sk.omega = s.omega;
  sk.cells.assign(static_cast<std::size_t>(s.p) * s.f * (s.omega + 1), Eid{});
  return sk;
}

/// XOR the eid of one edge into every cell that contains it: cell (q,i,j)
/// holds edges whose head is hit by h_{q,i} and whose phi_{q,i} value is
/// below 2^(omega-j).
inline void sketch_add_edge(const Seeds& s, Sketch& sk, const TypedEdge& e,
                            const std::vector<AncLabel>& lab) {
  Eid id = make_eid(s, e, lab);
  std::uint64_t key = edge_key64(s, e.u, e.v, e.type);
  for (int q = 0; q < s.p; ++q)
    for (int i = 0; i < s.f; ++i) {
      if (!h_hits(s, q, i, e.v)) continue;
      std::uint64_t phi = phi_of(s, q, i, key);
      for (int j = 0; j <= s.omega; ++j) {
        if (phi >= (std::uint64_t{1} << (s.omega - j))) break;
        sk.at(q, i, j) ^= id;
      }
    }
}

inline Sketch sketch_of(const Seeds& s, const std::vector<TypedEdge>& edges,
                        const std::vector<AncLabel>& lab) {
  Sketch sk = empty_sketch(s);
  for (const TypedEdge& e : edges) sketch_add_edge(s, sk, e, lab);
  return sk;
}

/// sketch({e}) from the eid alone (endpoints, type, and orientation are all
/// encoded in it).
inline Sketch sketch_of_single(const Seeds& s, const Eid& id) {
  auto e = decode_single(s, id);
  if (!e) throw InvalidQuery("sketch_of_single: not a valid single-edge eid");
  Sketch sk = empty_sketch(s);
  std::uint64_t key = edge_key64(s, e->u, e->v, e->type);
  for (int q = 0; q < s.p; ++q)
    for (int i = 0; i < s.f; ++i) {
      if (!h_hits(s, q, i, e->v)) continue;
      std::uint64_t phi = phi_of(s, q, i, key);
      for (int j = 0; j <= s.omega; ++j) {
        if (phi >= (std::uint64_t{1} << (s.omega - j))) break;
        sk.at(q, i, j) ^= id;
      }
    }
  return sk;
}

inline Sketch merge(const Sketch& a, const Sketch& b) {
  if (a.p != b.p || a.f != b.f || a.omega != b.omega || a.cells.size() != b.cells.size())
    throw InvalidQuery("merge: sketch dimensions differ");
  Sketch out = a;
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] ^= b.cells[i];
  return out;
}

/// One GetEdge round: scan the cells of round q for an isolated edge whose
/// endpoints avoid F.  The caller guarantees the sketched set has no edges
/// oriented out of an F-vertex.
inline std::optional<Eid> get_edge(const Seeds& s, const Sketch& sk, int q,
                                   const VertexSet& faults) {
  for (int i = 0; i < sk.f; ++i)
    for (int j = 0; j <= sk.omega; ++j) {
      const Eid& cell = sk.at(q, i, j);
      auto e = decode_single(s, cell);
      if (!e) continue;
      if (faults.contains(e->u) || faults.contains(e->v)) continue;
      return cell;
    }
  return std::nullopt;
}

}  // namespace ftcl

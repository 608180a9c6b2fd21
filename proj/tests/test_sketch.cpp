#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <set>

#include "ftcl/partition.hpp"
#include "ftcl/sketch.hpp"
#include "helpers.hpp"

using namespace ftcl;

namespace {

std::vector<Vertex> component_of(const Graph& g, Vertex v) {
  auto cc = connected_components(g);
  std::vector<Vertex> out;
  for (Vertex u = 0; u < g.n(); ++u)
    if (cc[u] == cc[v]) out.push_back(u);
  return out;
}

struct Setup {
  Graph g;
  CoarseHierarchy ch;
  AuxGraph aux;  // unsparsified
  std::vector<AncLabel> lab;
};

Setup make_setup(std::uint64_t seed) {
  Setup s;
  auto hg = testing::make_hub_graph(10, 5, 1, 8, seed);
  s.g = hg.g;
  auto h = build_base_hierarchy(s.g, component_of(s.g, 0), 4, seed);
  auto part = derandomized_partition({h}, s.g.n(), 2);
  s.ch = coarsen(s.g, h, part, 1);
  s.aux = build_aux_graph(s.g, s.ch);
  s.lab = anc_labels(s.ch, s.g.n());
  return s;
}

}  // namespace

TEST_CASE("ancestry labels") {
  auto su = make_setup(17);
  const auto& ch = su.ch;
  const auto& lab = su.lab;

  SECTION("identity") {
    for (Vertex v = 0; v < su.g.n(); ++v) {
      REQUIRE(same_vertex(lab[v], lab[v]));
      REQUIRE(same_comp(lab[v], lab[v]));
      REQUIRE(comp_ancestor(lab[v], lab[v]));
      REQUIRE(tree_ancestor(lab[v], lab[v]));
    }
  }
  SECTION("component root is a tree ancestor of every member") {
    for (const auto& comp : ch.comps)
      for (Vertex v : comp.members) {
        REQUIRE(tree_ancestor(lab[comp.root], lab[v]));
        REQUIRE(same_comp(lab[comp.root], lab[v]));
      }
  }
  SECTION("interval tests agree with direct hierarchy traversal") {
    Rng rng(33);
    for (int rep = 0; rep < 4000; ++rep) {
      Vertex u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(su.g.n())));
      Vertex v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(su.g.n())));
      int ku = ch.comp_of[u], kv = ch.comp_of[v];
      REQUIRE(same_comp(lab[u], lab[v]) == (ku == kv));
      REQUIRE(comp_ancestor(lab[u], lab[v]) == ch.is_ancestor(ku, kv));
      REQUIRE(same_vertex(lab[u], lab[v]) == (u == v));
      if (ku == kv) {
        // Tree-ancestry oracle: walk up from v toward the root of T(K).
        const auto& comp = ch.comps[static_cast<std::size_t>(ku)];
        std::vector<Vertex> par(su.g.n(), -1);
        std::vector<std::vector<Vertex>> adj(su.g.n());
        for (const Edge& e : comp.tree) {
          adj[e.u].push_back(e.v);
          adj[e.v].push_back(e.u);
        }
        std::vector<Vertex> order{comp.root};
        std::vector<char> seen(su.g.n(), 0);
        seen[comp.root] = 1;
        for (std::size_t i = 0; i < order.size(); ++i)
          for (Vertex w : adj[order[i]])
            if (!seen[w]) {
              seen[w] = 1;
              par[w] = order[i];
              order.push_back(w);
            }
        bool anc = false;
        for (Vertex x = v; x != -1; x = par[x])
          if (x == u) anc = true;
        REQUIRE(tree_ancestor(lab[u], lab[v]) == anc);
      }
    }
  }
}

TEST_CASE("unique edge identifiers") {
  Seeds s = make_seeds(64, 2, 2024, 2);

  SECTION("deterministic and type-sensitive") {
    REQUIRE(uid_of(s, 3, 9, kOriginal) == uid_of(s, 3, 9, kOriginal));
    Rng rng(7);
    for (int rep = 0; rep < 100000; ++rep) {
      Vertex u = static_cast<Vertex>(rng.below(64));
      Vertex v = static_cast<Vertex>(rng.below(64));
      if (u == v) continue;
      int t1 = static_cast<int>(rng.below(65)) - 1;  // -1 = original
      int t2 = static_cast<int>(rng.below(65)) - 1;
      if (t1 == t2) continue;
      REQUIRE(uid_of(s, u, v, t1) != uid_of(s, u, v, t2));
    }
  }
  SECTION("XOR of several uids is never a valid uid") {
    // Universe of 1000 edges; no XOR-sum of 2..10 uids matches any of them.
    Rng rng(99);
    std::vector<std::uint64_t> universe;
    std::set<std::uint64_t> valid;
    while (universe.size() < 1000) {
      Vertex u = static_cast<Vertex>(rng.below(64));
      Vertex v = static_cast<Vertex>(rng.below(64));
      if (u == v) continue;
      std::uint64_t id = uid_of(s, u, v, static_cast<int>(rng.below(65)) - 1);
      if (valid.insert(id).second) universe.push_back(id);
    }
    int collisions = 0;
    for (int rep = 0; rep < 100000; ++rep) {
      std::size_t k = 2 + rng.below(9);
      std::set<std::size_t> idx;  // distinct picks: E' is a set, not a multiset
      while (idx.size() < k) idx.insert(rng.below(universe.size()));
      std::uint64_t x = 0;
      for (std::size_t i : idx) x ^= universe[i];
      if (valid.count(x)) ++collisions;
    }
    REQUIRE(collisions == 0);
  }
}

TEST_CASE("eid encode and decode") {
  auto su = make_setup(5);
  Seeds s = make_seeds(su.g.n(), 2, 11, 2);

  SECTION("singleton round-trips; zero and sums are rejected") {
    REQUIRE(!decode_single(s, Eid{}).has_value());
    Rng rng(4);
    int rejected_pairs = 0;
    const int pairs = 100000;
    for (int rep = 0; rep < pairs; ++rep) {
      const TypedEdge& a = su.aux.edges[rng.below(su.aux.edges.size())];
      const TypedEdge& b = su.aux.edges[rng.below(su.aux.edges.size())];
      Eid ea = make_eid(s, a, su.lab);
      auto dec = decode_single(s, ea);
      REQUIRE(dec.has_value());
      REQUIRE(*dec == a);
      if (!(a == b) && !decode_single(s, ea ^ make_eid(s, b, su.lab))) ++rejected_pairs;
      if (a == b) ++rejected_pairs;  // XOR is zero, rejected trivially
    }
    REQUIRE(rejected_pairs == pairs);
  }
}

TEST_CASE("hash family statistics") {
  // P[h_{q,i}(v) = 1] should be 1/(2f) within 3 sigma.
  for (int f : {1, 3}) {
    Seeds s = make_seeds(100000, f, 77, 2);
    long long hits = 0;
    const long long trials = 100000;
    for (long long v = 0; v < trials; ++v) hits += h_hits(s, 1, 0, static_cast<Vertex>(v));
    double p0 = 1.0 / (2 * f);
    double sigma = std::sqrt(trials * p0 * (1 - p0));
    REQUIRE(std::abs(hits - trials * p0) <= 3 * sigma);
  }
}

TEST_CASE("sketch algebra") {
  auto su = make_setup(23);
  Seeds s = make_seeds(su.g.n(), 2, 31, 2);
  Rng rng(6);
  auto random_subset = [&](double p) {
    std::vector<TypedEdge> out;
    for (const TypedEdge& e : su.aux.edges)
      if (rng.coin(p)) out.push_back(e);
    return out;
  };

  SECTION("self-merge cancels") {
    auto a = random_subset(0.3);
    Sketch sa = sketch_of(s, a, su.lab);
    REQUIRE(merge(sa, sa).is_zero());
  }
  SECTION("merge equals sketch of the symmetric difference") {
    for (int rep = 0; rep < 20; ++rep) {
      auto a = random_subset(0.4);
      auto b = random_subset(0.4);
      std::vector<TypedEdge> sym;
      for (const TypedEdge& e : su.aux.edges) {
        bool ina = std::find(a.begin(), a.end(), e) != a.end();
        bool inb = std::find(b.begin(), b.end(), e) != b.end();
        if (ina != inb) sym.push_back(e);
      }
      Sketch m = merge(sketch_of(s, a, su.lab), sketch_of(s, b, su.lab));
      REQUIRE(m.cells == sketch_of(s, sym, su.lab).cells);
    }
  }
  SECTION("single-edge sketch from the eid alone") {
    for (int rep = 0; rep < 50; ++rep) {
      const TypedEdge& e = su.aux.edges[rng.below(su.aux.edges.size())];
      Sketch direct = sketch_of(s, {e}, su.lab);
      Sketch derived = sketch_of_single(s, make_eid(s, e, su.lab));
      REQUIRE(direct.cells == derived.cells);
    }
  }
  SECTION("dimension mismatch is rejected") {
    Seeds s2 = make_seeds(su.g.n(), 3, 31, 2);
    REQUIRE_THROWS_AS(merge(empty_sketch(s), empty_sketch(s2)), InvalidQuery);
  }
}

TEST_CASE("get_edge") {
  auto su = make_setup(41);

  SECTION("empty sketch always fails") {
    Seeds s = make_seeds(su.g.n(), 2, 13, 2);
    Sketch sk = empty_sketch(s);
    for (int q = 0; q < s.p; ++q)
      REQUIRE(!get_edge(s, sk, q, VertexSet{}).has_value());
  }

  SECTION("sound and frequent enough for f <= 4") {
    auto sp = sparsify_orient(su.aux, 2, 1234);
    for (int f : {1, 2, 4}) {
      Seeds s = make_seeds(su.g.n(), f, 1000 + f, 2);
      Rng rng(2000 + f);
      long long succ = 0, trials = 0;
      for (int rep = 0; rep < 60; ++rep) {
        // Random fault set of size f, then the eligible edge set: all
        // out-edges of non-fault vertices (no edge oriented from a fault).
        std::vector<Vertex> fs;
        while (fs.size() < static_cast<std::size_t>(f)) {
          Vertex x = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(su.g.n())));
          if (std::find(fs.begin(), fs.end(), x) == fs.end()) fs.push_back(x);
        }
        VertexSet faults(fs);
        std::vector<TypedEdge> eset;
        bool eligible = false;
        for (const TypedEdge& e : sp.edges) {
          if (faults.contains(e.u)) continue;
          if (rng.coin(0.5)) continue;
          eset.push_back(e);
          if (!faults.contains(e.v)) eligible = true;
        }
        if (!eligible) continue;
        Sketch sk = sketch_of(s, eset, su.lab);
        for (int q = 0; q < s.p; ++q) {
          ++trials;
          auto got = get_edge(s, sk, q, faults);
          if (!got) continue;
          ++succ;
          auto e = decode_single(s, *got);
          REQUIRE(e.has_value());  // soundness: a real, fault-free edge of E'
          REQUIRE(std::find(eset.begin(), eset.end(), *e) != eset.end());
          REQUIRE(!faults.contains(e->u));
          REQUIRE(!faults.contains(e->v));
        }
      }
      // Per-round success >= 1/16, allowing 3 sigma of binomial noise.
      REQUIRE(trials >= 200);
      double p0 = 1.0 / 16;
      double bound = trials * p0 - 3 * std::sqrt(trials * p0 * (1 - p0));
      REQUIRE(static_cast<double>(succ) >= bound);
    }
  }
}
